import pytest

from groupavg import parse_group_spec

# overflow to inf is the documented divergence signal in the MLP trainer,
# so the suite leaves numpy's default floating-point error state alone

SMALL_GROUP_SPECS = [
    "cyclic:1",
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:6",
    "cyclic:12",
    "signflip:1",
    "signflip:2",
    "signflip:3",
    "dihedral:3",
    "dihedral:4",
    "dihedral:5",
    "dihedral:6",
    "symmetric:2",
    "symmetric:3",
    "product(cyclic:2,cyclic:3)",
    "product(cyclic:2,symmetric:3)",
]


@pytest.fixture(scope="session")
def small_groups():
    return {spec: parse_group_spec(spec) for spec in SMALL_GROUP_SPECS}


def gf2_rank(vectors: list[int], d: int) -> int:
    """Row-reduction rank of bit-vectors over the two-element field."""
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def brute_force_classes(group) -> list[set[int]]:
    """Independent conjugacy oracle: plain double loop over the table."""
    seen = set()
    classes = []
    for g in range(group.order):
        if g in seen:
            continue
        orbit = set()
        for s in range(group.order):
            orbit.add(int(group.mult[group.mult[s, g], group.inv[s]]))
        seen |= orbit
        classes.append(orbit)
    return classes
