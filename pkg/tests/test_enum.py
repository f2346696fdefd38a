import pytest
from liesym.enum import AlgebraFamily, CheckGroup, CheckStatus, FamilyTag, G0Form, HaLeeGroup, OutputFormat




@pytest.mark.parametrize('text, member', [
    ('e0tilde2', HaLeeGroup.E0TILDE2),
    ('E0TILDE2', HaLeeGroup.E0TILDE2),
    ('gd', HaLeeGroup.GD),
    ('r3', HaLeeGroup.R3),
])
def test_case_insensitive_lookup(text, member):
    assert HaLeeGroup(text) is member
    assert text in HaLeeGroup


def test_unknown_member():
    assert 'Nil' not in HaLeeGroup
    assert 3 not in HaLeeGroup
    assert [] not in HaLeeGroup
    with pytest.raises(ValueError):
        HaLeeGroup('Nil')


def test_members_print_as_values():
    assert str(HaLeeGroup.E0TILDE2) == "E0tilde2"
    assert str(FamilyTag.GI) == "GIfamily"
    assert f"{AlgebraFamily.OTHER_UNIMODULAR}" == "OtherUnimodular"
    assert HaLeeGroup.SU2 == "SU2"


def test_other_enums():
    assert G0Form('a2') is G0Form.A2
    assert OutputFormat('CSV') is OutputFormat.CSV
    assert CheckGroup('Geodesics') is CheckGroup.GEODESICS


def test_check_status_is_case_sensitive():
    assert 'pass' in CheckStatus
    assert 'PASS' not in CheckStatus
