"""
State document reader and writer.

A state document is a JSON object:

    density matrix: {"dims": [2, 2], "labels": ["a", "b"],
                     "re": [[...], ...], "im": [[...], ...]}
    pure state:     {"dims": [2, 2], "labels": ["a", "b"],
                     "re": [...], "im": [...]}

Entries follow the row-major order of the labels. "im" may be omitted for
real states. Floats are written with their shortest round-trip repr, so a
dumped state loads back bit for bit.

Spec documents for the `one-mc` and `pseudo-pure` constructors:

    one-mc:      {"alphas": [...], "a_states": [[...], ...], "c_states": [[...], ...],
                  "labels": ["a", "b", "c"]}
    pseudo-pure: {"members": [{"p": 0.5, "state": <pure state document>}, ...],
                  "flag_dim": 2, "flag_label": "f"}

Any vector or matrix in a spec may be a plain real array or an object
{"re": [...], "im": [...]}.

Structural problems raise StateFileError (with line, column or field);
a well-formed document that violates a state invariant raises
ValidationError from the state constructors.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from lib.errors import StateFileError, ValidationError
from lib.linalg import DimSignature
from lib.schema import DEFAULT_LABELS, FLAG_LABEL, STATE_OPTIONAL_KEYS, STATE_REQUIRED_KEYS
from lib.states import DensityMatrix, OneWayMcSpec, PureState

logger = logging.getLogger(__name__)


# =============================================================================
# JSON HELPERS
# =============================================================================

def _parse_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise StateFileError(f"invalid JSON in {source}: {e.msg}", line=e.lineno, column=e.colno)


def _read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise StateFileError(f"cannot read {path}: {e.strerror or e}")


def _require_object(doc: Any, source: str) -> Dict[str, Any]:
    if not isinstance(doc, dict):
        raise StateFileError(f"{source} must be a JSON object, got {type(doc).__name__}")
    return doc


def _real_array(value: Any, field: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise StateFileError("entries must be numbers in regular nested lists", field=field)
    if arr.dtype == object:
        raise StateFileError("entries must be numbers in regular nested lists", field=field)
    if not np.all(np.isfinite(arr)):
        raise StateFileError("entries must be finite numbers", field=field)
    return arr


def _complex_array(value: Any, field: str) -> np.ndarray:
    """Plain real array or {"re": ..., "im": ...} object."""
    if isinstance(value, dict):
        if 're' not in value:
            raise StateFileError("complex array needs 're'", field=f'{field}.re')
        re_part = _real_array(value['re'], f'{field}.re')
        if 'im' not in value:
            return re_part.astype(complex)
        im_part = _real_array(value['im'], f'{field}.im')
        if im_part.shape != re_part.shape:
            raise StateFileError(
                f"'im' shape {im_part.shape} differs from 're' shape {re_part.shape}",
                field=f'{field}.im')
        return re_part + 1j * im_part
    return _real_array(value, field).astype(complex)


def _signature(doc: Dict[str, Any]) -> DimSignature:
    dims = doc['dims']
    labels = doc['labels']
    if not isinstance(dims, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise StateFileError(f"dims must be a list of integers, got {dims!r}", field='dims')
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise StateFileError(f"labels must be a list of strings, got {labels!r}", field='labels')
    try:
        return DimSignature(tuple(dims), tuple(labels))
    except ValidationError as e:
        raise StateFileError(str(e), field='labels')


# =============================================================================
# STATE DOCUMENTS
# =============================================================================

def state_from_document(doc: Any) -> PureState | DensityMatrix:
    """
    Build a PureState (1-D "re") or DensityMatrix (2-D "re") from a parsed document.

    Raises:
        StateFileError: Missing keys, wrong types or shapes
        ValidationError: Normalization, Hermiticity, trace or positivity violated
    """
    doc = _require_object(doc, 'state document')
    for key in STATE_REQUIRED_KEYS:
        if key not in doc:
            raise StateFileError("missing required field", field=key)
    unknown = set(doc) - set(STATE_REQUIRED_KEYS) - set(STATE_OPTIONAL_KEYS)
    if unknown:
        logger.warning("Ignoring unknown state fields: %s", sorted(unknown))

    sig = _signature(doc)
    values = _real_array(doc['re'], 're').astype(complex)
    if 'im' in doc:
        im_part = _real_array(doc['im'], 'im')
        if im_part.shape != values.shape:
            raise StateFileError(
                f"'im' shape {im_part.shape} differs from 're' shape {values.shape}", field='im')
        values.imag = im_part
    n = sig.total
    if values.ndim == 1:
        if values.shape != (n,):
            raise StateFileError(f"pure state needs {n} amplitudes, got {values.shape[0]}", field='re')
        return PureState(values, sig)
    if values.ndim == 2:
        if values.shape != (n, n):
            raise StateFileError(f"density matrix needs shape ({n}, {n}), got {values.shape}",
                                 field='re')
        return DensityMatrix(values, sig)
    raise StateFileError(f"'re' must be 1-D or 2-D, got {values.ndim}-D", field='re')


def state_to_document(state: PureState | DensityMatrix) -> Dict[str, Any]:
    values = state.amplitudes if isinstance(state, PureState) else state.matrix
    return {
        'dims': list(state.sig.dims),
        'labels': list(state.sig.labels),
        're': values.real.tolist(),
        'im': values.imag.tolist(),
    }


def loads_state(text: str, source: str = '<string>') -> PureState | DensityMatrix:
    return state_from_document(_parse_json(text, source))


def load_state(path: str | Path) -> PureState | DensityMatrix:
    """
    Read a state document from disk.

    Args:
        path: JSON file path

    Returns:
        PureState or DensityMatrix, chosen by the shape of 're'
    """
    state = loads_state(_read_text(path), str(path))
    logger.info("Loaded %s on %s from %s", type(state).__name__, list(state.sig.labels), path)
    return state


def dumps_state(state: PureState | DensityMatrix) -> str:
    return json.dumps(state_to_document(state), indent=2) + '\n'


def dump_state(state: PureState | DensityMatrix, path: str | Path) -> Path:
    """Write a state document, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_state(state), encoding='utf-8')
    logger.info("Saved: %s", path)
    return path


def as_density(state: PureState | DensityMatrix) -> DensityMatrix:
    return state.density() if isinstance(state, PureState) else state


# =============================================================================
# SPEC DOCUMENTS
# =============================================================================

def _vector_list(value: Any, field: str) -> List[np.ndarray]:
    if not isinstance(value, list) or not value:
        raise StateFileError("must be a non-empty list of vectors", field=field)
    return [_complex_array(v, f'{field}[{i}]').reshape(-1) for i, v in enumerate(value)]


def one_way_mc_spec_from_document(doc: Any) -> Tuple[OneWayMcSpec, Tuple[str, str, str]]:
    doc = _require_object(doc, 'one-mc spec')
    for key in ('alphas', 'a_states', 'c_states'):
        if key not in doc:
            raise StateFileError("missing required field", field=key)
    labels = tuple(doc.get('labels', DEFAULT_LABELS))
    if len(labels) != 3 or not all(isinstance(l, str) for l in labels):
        raise StateFileError(f"need three label strings, got {list(labels)}", field='labels')
    alphas = _complex_array(doc['alphas'], 'alphas').reshape(-1)
    spec = OneWayMcSpec(alphas, tuple(_vector_list(doc['a_states'], 'a_states')),
                        tuple(_vector_list(doc['c_states'], 'c_states')))
    return spec, labels


def load_one_way_mc_spec(path: str | Path) -> Tuple[OneWayMcSpec, Tuple[str, str, str]]:
    """
    Read a one-way maximally correlated spec.

    Returns:
        (OneWayMcSpec, labels for a, b, c)
    """
    return one_way_mc_spec_from_document(_parse_json(_read_text(path), str(path)))


def pseudo_pure_spec_from_document(doc: Any
                                   ) -> Tuple[List[Tuple[float, PureState]], Optional[int], str]:
    doc = _require_object(doc, 'pseudo-pure spec')
    members = doc.get('members')
    if not isinstance(members, list) or not members:
        raise StateFileError("must be a non-empty list", field='members')
    pairs = []
    for i, member in enumerate(members):
        field = f'members[{i}]'
        if not isinstance(member, dict) or 'p' not in member or 'state' not in member:
            raise StateFileError("needs 'p' and 'state'", field=field)
        p = member['p']
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise StateFileError(f"probability must be a number, got {p!r}", field=f'{field}.p')
        try:
            state = state_from_document(member['state'])
        except StateFileError as e:
            inner = f'.{e.field}' if e.field else ''
            raise StateFileError(e.args[0], field=f'{field}.state{inner}')
        if not isinstance(state, PureState):
            raise StateFileError("member state must be pure (1-D 're')", field=f'{field}.state.re')
        pairs.append((float(p), state))

    flag_dim = doc.get('flag_dim')
    if flag_dim is not None and (not isinstance(flag_dim, int) or isinstance(flag_dim, bool)):
        raise StateFileError(f"flag_dim must be an integer, got {flag_dim!r}", field='flag_dim')
    flag_label = doc.get('flag_label', FLAG_LABEL)
    if not isinstance(flag_label, str):
        raise StateFileError(f"flag_label must be a string, got {flag_label!r}", field='flag_label')
    return pairs, flag_dim, flag_label


def load_pseudo_pure_spec(path: str | Path
                          ) -> Tuple[List[Tuple[float, PureState]], Optional[int], str]:
    """
    Read a pseudo-pure spec.

    Returns:
        (list of (p_i, |phi_i>), flag dimension or None, flag label)
    """
    return pseudo_pure_spec_from_document(_parse_json(_read_text(path), str(path)))
