from __future__ import annotations

import sys
from datetime import date
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ransomrisk.model import AdversaryProfile, AttackRecord, VictimProfile


def make_victim(name="acme-corp", country="US", sectors=("manufacturing",),
                revenue=1_000_000, employees=500, org_type="for-profit") -> VictimProfile:
    return VictimProfile(name=name, country=country, sectors=frozenset(sectors),
                         revenue=revenue, employees=employees, org_type=org_type)


def make_adversary(name="Phobos", aliases=(), sophistication="intermediate",
                   motive="financial-gain", intent=("financial-theft",),
                   resource_level="organization", ttps=("T1486",)) -> AdversaryProfile:
    return AdversaryProfile(
        name=name, aliases=frozenset(aliases), sophistication=sophistication,
        motive=motive, intent=frozenset(intent), resource_level=resource_level,
        capability_count=len(ttps), ttps=frozenset(ttps),
    )


def make_attack(victim=None, adversary=None, attack_date=date(2023, 5, 14),
                ewma=None, safe=0) -> AttackRecord:
    victim = victim or make_victim()
    adversary = adversary or make_adversary()
    return AttackRecord(victim=victim, adversary_name=adversary.name,
                        attack_date=attack_date, adversary=adversary,
                        ewma=ewma, safe=safe)


@pytest.fixture
def victim():
    return make_victim()


@pytest.fixture
def adversary():
    return make_adversary()


@pytest.fixture
def attack(victim, adversary):
    return make_attack(victim, adversary)


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """Desk-scale end-to-end fixture corpus, built once per session."""
    from corpus import build_corpus

    root = tmp_path_factory.mktemp("corpus")
    return build_corpus(root)
