"""
Readers and writers for state and spec documents.

This module provides the JSON state format shared by the command line and
the library, plus the spec readers used by `state make one-mc` and
`state make pseudo-pure`.
"""

from lib.parser.state_file import (
    as_density,
    dump_state,
    dumps_state,
    load_one_way_mc_spec,
    load_pseudo_pure_spec,
    load_state,
    loads_state,
    one_way_mc_spec_from_document,
    pseudo_pure_spec_from_document,
    state_from_document,
    state_to_document,
)

__all__ = [
    # State documents
    'load_state',
    'loads_state',
    'dump_state',
    'dumps_state',
    'state_from_document',
    'state_to_document',
    'as_density',
    # Spec documents
    'load_one_way_mc_spec',
    'load_pseudo_pure_spec',
    'one_way_mc_spec_from_document',
    'pseudo_pure_spec_from_document',
]
