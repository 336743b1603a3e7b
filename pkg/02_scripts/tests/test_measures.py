import json

import pytest

from lib.errors import ValidationError
from lib.export import dumps_document
from lib.measures import measure_state, normalize_measure_name, parse_measure_list
from lib.states import example_family, make_werner


@pytest.mark.parametrize('raw, expected', [
    ('entropy', 'entropy'),
    ('  VN ', 'entropy'),
    ('conditional_entropy', 'entropy'),
    ('QD', 'discord'),
    ('classical correlation', 'discord'),
    ('EoF', 'entanglement'),
    ('partial_transpose', 'ppt'),
])
def test_normalize_measure_name(raw, expected):
    assert normalize_measure_name(raw) == expected


def test_normalize_measure_name_unknown():
    with pytest.raises(ValueError, match='Unknown measure'):
        normalize_measure_name('negativity')
    with pytest.raises(ValueError):
        normalize_measure_name(None)


def test_parse_measure_list():
    assert parse_measure_list('entropy, eof,vn,,ppt') == ['entropy', 'entanglement', 'ppt']
    assert parse_measure_list(['qd', 'discord']) == ['discord']
    with pytest.raises(ValueError):
        parse_measure_list(' , ')


def test_measure_bell(bell_rho, fast_budget):
    doc = measure_state(bell_rho, 'entropy,discord,eof,ppt', budget=fast_budget)
    assert doc['dims'] == [2, 2]
    assert doc['labels'] == ['a', 'b']
    assert doc['entropy']['S_ab'] == 0.0
    assert doc['entropy']['S_a'] == pytest.approx(1.0, abs=1e-9)
    assert doc['entropy']['S_cond']['a|b'] == pytest.approx(-1.0, abs=1e-9)
    assert doc['discord']['discord'] == pytest.approx(1.0, abs=1e-6)
    assert doc['discord']['target'] == 'a'
    assert doc['discord']['measured'] == 'b'
    assert doc['entanglement']['classification'] == 'pure'
    assert doc['entanglement']['E_F'] == pytest.approx(1.0, abs=1e-9)
    assert doc['entanglement']['E_C']['provenance'] == 'exact-pure'
    assert doc['ppt']['ppt'] is False
    assert doc['ppt']['separable'] is False


def test_measure_document_is_json(bell_rho, fast_budget):
    doc = measure_state(bell_rho, ['entropy', 'discord'], budget=fast_budget)
    parsed = json.loads(dumps_document(doc))
    assert parsed['discord']['optimizer']['starts_tried'] == 6
    assert set(parsed) == {'dims', 'labels', 'entropy', 'discord'}


def test_measure_reduces_tripartite_state(quarter_point, fast_budget):
    psi, _, _ = example_family(quarter_point)
    doc = measure_state(psi.density(), 'entropy,discord,ppt', budget=fast_budget,
                        target='a', measured='c')
    assert doc['labels'] == ['a', 'b', 'c']
    assert 'S_abc' in doc['entropy']
    assert doc['discord']['measured'] == 'c'
    # rho_ac is a mixture of product states
    assert doc['ppt']['ppt'] is True


def test_measure_swapped_pair(classical_quantum_rho, fast_budget):
    doc = measure_state(classical_quantum_rho, 'discord', budget=fast_budget,
                        target='b', measured='a')
    assert abs(doc['discord']['discord']) <= 1e-9


def test_measure_rejects_bad_labels(bell_rho):
    with pytest.raises(ValidationError):
        measure_state(bell_rho, 'discord', target='z')
    with pytest.raises(ValidationError):
        measure_state(bell_rho, 'discord', target='a', measured='a')


def test_measure_uncertified_bounds():
    doc = measure_state(make_werner(0.9), 'entanglement')
    section = doc['entanglement']
    assert section['classification'] == 'mixed-entangled'
    assert section['E_C']['provenance'] == 'interval'
    assert section['E_C']['lower'] <= section['E_C']['upper']
    assert section['Delta'] is None
    assert section['irreversibility']['type'] == 'O'
    assert section['irreversibility']['verdict'] == 'no certificate'
