from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from ransomrisk import model
from ransomrisk.errors import (
    InvalidProfile,
    MalformedCveId,
    MalformedTechniqueId,
    UnknownCountry,
    UnknownSector,
    UnknownVocabValue,
)

from conftest import make_adversary, make_victim


class TestCountryValidation:
    def test_lowercase_normalizes(self):
        assert model.validate_country("us") == "US"

    def test_uppercase_passes_through(self):
        assert model.validate_country("US") == "US"

    def test_unassigned_code_rejected(self):
        with pytest.raises(UnknownCountry):
            model.validate_country("ZZ")

    def test_whole_table_round_trips(self):
        # The vocabulary is closed: everything in the table validates to itself.
        for code in model.ISO_COUNTRIES:
            assert model.validate_country(code) == code
            assert model.validate_country(code.lower()) == code

    def test_table_size(self):
        assert len(model.ISO_COUNTRIES) == 249


class TestSectorValidation:
    def test_known_sector(self):
        assert model.validate_sector("financial-services") == "financial-services"

    def test_automotive(self):
        assert model.validate_sector("automotive") == "automotive"

    def test_space_and_case_normalization(self):
        assert model.validate_sector("Financial Services") == "financial-services"

    def test_unknown_sector_rejected(self):
        with pytest.raises(UnknownSector):
            model.validate_sector("underwater-basket-weaving")

    def test_whole_table_round_trips(self):
        for sector in model.STIX_SECTORS:
            assert model.validate_sector(sector) == sector


class TestTechniqueValidation:
    def test_plain_technique(self):
        assert model.validate_technique("T1486") == "T1486"

    def test_sub_technique(self):
        assert model.validate_technique("T1059.001") == "T1059.001"

    def test_wrong_prefix(self):
        with pytest.raises(MalformedTechniqueId):
            model.validate_technique("X9999")

    @pytest.mark.parametrize("bad", ["T99", "T12345", "T1486.1", "T1486.0012", ""])
    def test_malformed_shapes(self, bad):
        with pytest.raises(MalformedTechniqueId):
            model.validate_technique(bad)

    def test_snapshot_tier(self, tmp_path):
        snapshot = tmp_path / "attack_ids.txt"
        snapshot.write_text("# snapshot\nT1486\n", encoding="utf-8")
        known = model.load_id_snapshot(snapshot)
        assert model.validate_technique("T1486", known) == "T1486"
        # Pattern-valid but absent from the snapshot: rejected only with snapshot.
        assert model.validate_technique("T1490") == "T1490"
        with pytest.raises(MalformedTechniqueId):
            model.validate_technique("T1490", known)


class TestCveValidation:
    def test_valid(self):
        assert model.validate_cve("CVE-2021-34473") == "CVE-2021-34473"

    def test_long_serial(self):
        assert model.validate_cve("cve-2024-123456") == "CVE-2024-123456"

    @pytest.mark.parametrize("bad", ["CVE-21-1234", "CVE-2021-123", "2021-34473"])
    def test_malformed(self, bad):
        with pytest.raises(MalformedCveId):
            model.validate_cve(bad)


@given(st.text(max_size=6))
def test_random_strings_never_slip_past_country_validator(text):
    normalized = text.strip().upper()
    if normalized in model.ISO_COUNTRIES:
        assert model.validate_country(text) == normalized
    else:
        with pytest.raises(UnknownCountry):
            model.validate_country(text)


@given(st.text(max_size=24))
def test_random_strings_never_slip_past_sector_validator(text):
    try:
        result = model.validate_sector(text)
    except UnknownSector:
        return
    assert result in model.STIX_SECTORS


class TestVictimProfile:
    def test_constructor_validates_fields(self):
        profile = make_victim(country="us", sectors=("Manufacturing",))
        assert profile.country == "US"
        assert profile.sectors == frozenset({"manufacturing"})

    def test_empty_sectors_rejected(self):
        with pytest.raises(InvalidProfile):
            make_victim(sectors=())

    def test_negative_revenue_rejected(self):
        with pytest.raises(InvalidProfile):
            make_victim(revenue=-1)

    def test_bad_org_type_rejected(self):
        with pytest.raises(UnknownVocabValue):
            make_victim(org_type="collective")

    def test_dict_round_trip(self):
        profile = make_victim(sectors=("automotive", "manufacturing"))
        assert model.VictimProfile.from_dict(profile.to_dict()) == profile


class TestAdversaryProfile:
    def test_capability_count_must_match_ttps(self):
        with pytest.raises(InvalidProfile):
            model.AdversaryProfile(name="X", capability_count=3, ttps=frozenset({"T1486"}))

    def test_capability_count_free_when_no_ttps(self):
        profile = model.AdversaryProfile(name="X", capability_count=5)
        assert profile.capability_count == 5

    def test_known_names_casefold(self):
        profile = make_adversary(name="Vice Society", aliases=("ViceSoc",))
        assert "vice society" in profile.known_names()
        assert "vicesoc" in profile.known_names()

    def test_dict_round_trip(self):
        profile = make_adversary(ttps=("T1486", "T1059.001"))
        assert model.AdversaryProfile.from_dict(profile.to_dict()) == profile


class TestAttackRecord:
    def test_safe_label_domain(self, victim, adversary):
        with pytest.raises(InvalidProfile):
            make_victim_attack = model.AttackRecord(
                victim=victim, adversary_name=adversary.name,
                attack_date=__import__("datetime").date(2023, 1, 1),
                adversary=adversary, safe=2,
            )

    def test_negative_ewma_rejected(self, victim, adversary):
        import datetime

        with pytest.raises(InvalidProfile):
            model.AttackRecord(
                victim=victim, adversary_name=adversary.name,
                attack_date=datetime.date(2023, 1, 1), adversary=adversary, ewma=-0.5,
            )

    def test_round_trip_with_unset_ewma(self, attack):
        again = model.AttackRecord.from_dict(attack.to_dict())
        assert again == attack
        assert again.ewma is None
