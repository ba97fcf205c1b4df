import pytest

from patchfold.config.tolerances import DEFAULT_TOLERANCES, ENV_VAR, load_tolerances, parse_tolerance_override
from patchfold.errors import InvalidInput


def test_single_number_overrides_length_tolerance():
    assert parse_tolerance_override('1e-7') == {'eps_len_rel': 1e-7}


def test_key_value_pairs():
    parsed = parse_tolerance_override('len=1e-8, ang=1e-10')
    assert parsed == {'eps_len_rel': 1e-8, 'eps_ang': 1e-10}


def test_blank_value_changes_nothing():
    assert parse_tolerance_override('  ') == {}


@pytest.mark.parametrize('raw', ['abc', 'len=', 'len=-1', 'size=1e-3', '-1e-9', 'ang=inf'])
def test_malformed_override_is_rejected(raw):
    with pytest.raises(InvalidInput):
        parse_tolerance_override(raw)


def test_load_merges_environment_over_defaults():
    settings = load_tolerances({ENV_VAR: 'len=1e-6'})
    assert settings['eps_len_rel'] == 1e-6
    assert settings['eps_ang'] == DEFAULT_TOLERANCES['eps_ang']
    assert load_tolerances({}) == DEFAULT_TOLERANCES


def test_environment_variable_is_read(monkeypatch):
    monkeypatch.setenv(ENV_VAR, '2e-9')
    assert load_tolerances()['eps_len_rel'] == 2e-9
