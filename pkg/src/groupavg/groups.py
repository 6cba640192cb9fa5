"""Finite groups as dense index tables.

Elements are dense indices ``0..order-1`` with the identity pinned at
index 0; every higher layer of the toolkit speaks indices only.  Built-in
families: cyclic, sign_flip (bit vectors under xor), dihedral, symmetric,
and direct products; arbitrary multiplication tables are accepted as the
``custom`` family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations as _iter_permutations
from typing import Iterable

import numpy as np

from .errors import SizeLimitError, UsageError

SIGN_FLIP_MAX_DIM = 16
SYMMETRIC_MAX_DIM = 8
EXHAUSTIVE_ASSOCIATIVITY_MAX = 512
_ASSOCIATIVITY_SAMPLES = 20_000
_VALIDATION_SEED = 0x5EED


class Group:
    """Finite group given by a dense multiplication table on indices.

    Parameters
    ----------
    mult : (order, order) integer array
        ``mult[a, b]`` is the index of the product ``a * b``.  Row and
        column 0 must realize the identity.
    labels : sequence of str
        Human-readable element names, one per index.
    family : str
        One of ``cyclic, sign_flip, dihedral, symmetric, product, custom``.
    params : tuple of int
        Family parameters (``(n,)``, ``(d,)``, factor orders for products,
        empty for custom).
    factors : optional pair of Group
        The two factors when ``family == "product"``.

    Large caps are accepted but memory scales as ``order**2`` for the
    table; the families are capped to keep things at desk scale.
    """

    def __init__(self, mult, labels, family, params, factors=None, validate=True):
        self.mult = np.ascontiguousarray(mult, dtype=np.int64)
        if self.mult.ndim != 2 or self.mult.shape[0] != self.mult.shape[1]:
            raise UsageError("multiplication table must be square")
        self.order = int(self.mult.shape[0])
        self.labels = [str(x) for x in labels]
        if len(self.labels) != self.order:
            raise UsageError("labels length must equal group order")
        self.family = str(family)
        self.params = tuple(int(p) for p in params)
        self.factors = factors
        self.identity = 0
        self.inv = np.argmax(self.mult == 0, axis=1).astype(np.int64)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        self._orders = None
        if validate:
            self.validate()

    # -- basic queries ---------------------------------------------------

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Group)
            and self.order == other.order
            and np.array_equal(self.mult, other.mult)
        )

    def __hash__(self) -> int:
        return hash((self.family, self.params, self.order, self.mult.tobytes()))

    def __repr__(self) -> str:
        return f"Group({group_spec_string(self)}, order={self.order})"

    def multiply(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        """k-th power of element a (k may be negative)."""
        if k < 0:
            return self.power(self.inverse(a), -k)
        out, base = 0, a
        while k:
            if k & 1:
                out = int(self.mult[out, base])
            base = int(self.mult[base, base])
            k >>= 1
        return out

    def element_order(self, a: int) -> int:
        if self._orders is None:
            self._orders = np.full(self.order, -1, dtype=np.int64)
        if self._orders[a] < 0:
            x, k = a, 1
            while x != 0:
                x = int(self.mult[x, a])
                k += 1
            self._orders[a] = k
        return int(self._orders[a])

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def index_of_label(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise UsageError(f"unknown element label {label!r}") from None

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        n = self.order
        if n < 1:
            raise UsageError("group must be nonempty")
        if self.mult.min() < 0 or self.mult.max() >= n:
            raise UsageError("table entries out of range")
        idx = np.arange(n)
        if not (np.array_equal(self.mult[0], idx) and np.array_equal(self.mult[:, 0], idx)):
            raise UsageError("index 0 is not a two-sided identity")
        if not (
            np.array_equal(np.sort(self.mult, axis=1), np.tile(idx, (n, 1)))
            and np.array_equal(np.sort(self.mult, axis=0), np.tile(idx[:, None], (1, n)))
        ):
            raise UsageError("table is not a Latin square")
        if not (
            np.array_equal(self.mult[idx, self.inv], np.zeros(n, dtype=np.int64))
            and np.array_equal(self.mult[self.inv, idx], np.zeros(n, dtype=np.int64))
        ):
            raise UsageError("inverse table inconsistent")
        self._check_associativity()

    def _check_associativity(self) -> None:
        m, n = self.mult, self.order
        if n <= EXHAUSTIVE_ASSOCIATIVITY_MAX:
            for a in range(n):
                # (a*b)*c versus a*(b*c), all b, c at once
                if not np.array_equal(m[m[a]], m[a][m]):
                    raise UsageError(f"associativity fails at a={a}")
        else:
            rng = np.random.default_rng(_VALIDATION_SEED)
            a, b, c = rng.integers(0, n, size=(3, _ASSOCIATIVITY_SAMPLES))
            if not np.array_equal(m[m[a, b], c], m[a, m[b, c]]):
                raise UsageError("associativity fails on sampled triples")


@dataclass(frozen=True)
class ConjugacyPartition:
    """Partition of element indices into conjugacy classes.

    Classes are ordered by their minimal element, which is also the
    stored representative; ``class_of[g]`` maps an element to its class.
    """

    classes: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    sizes: tuple[int, ...]
    class_of: np.ndarray

    def __len__(self) -> int:
        return len(self.classes)


# -- constructors ---------------------------------------------------------


def cyclic_group(n: int) -> Group:
    """Integers mod n under addition; element index == residue."""
    if n < 1:
        raise UsageError(f"cyclic group needs n >= 1, got {n}")
    idx = np.arange(n)
    mult = (idx[:, None] + idx[None, :]) % n
    return Group(mult, [str(i) for i in range(n)], "cyclic", (n,))


def sign_flip_group(d: int) -> Group:
    """Bit vectors of length d under xor, ordered by binary value.

    Element labels are the d-character bit strings; character i of the
    label corresponds to coordinate i of the flip action.
    """
    if d < 1:
        raise UsageError(f"sign-flip group needs d >= 1, got {d}")
    if d > SIGN_FLIP_MAX_DIM:
        raise SizeLimitError(f"sign-flip dimension capped at {SIGN_FLIP_MAX_DIM}, got {d}")
    n = 1 << d
    idx = np.arange(n)
    mult = idx[:, None] ^ idx[None, :]
    labels = [format(x, f"0{d}b") for x in range(n)]
    return Group(mult, labels, "sign_flip", (d,))


def dihedral_group(n: int) -> Group:
    """Symmetries of a regular n-gon, order 2n, rotations first.

    Index ``a`` (a < n) is the rotation r^a, index ``n + a`` is the
    reflection r^a s, with the relation s r = r^{-1} s.
    """
    if n < 3:
        raise UsageError(f"dihedral group needs n >= 3, got {n}")
    order = 2 * n
    a = np.arange(order) % n
    b = np.arange(order) // n
    sgn = np.where(b == 1, -1, 1)
    a_out = (a[:, None] + sgn[:, None] * a[None, :]) % n
    b_out = (b[:, None] + b[None, :]) % 2
    mult = a_out + n * b_out
    labels = [f"r{i}" for i in range(n)] + [f"r{i}s" for i in range(n)]
    return Group(mult, labels, "dihedral", (n,))


def symmetric_permutations(d: int) -> list[tuple[int, ...]]:
    """All permutations of range(d) in lexicographic one-line order."""
    return sorted(_iter_permutations(range(d)))


def _lehmer_ranks(perms: np.ndarray) -> np.ndarray:
    """Lexicographic ranks of permutation rows (factorial number system)."""
    n, d = perms.shape
    ranks = np.zeros(n, dtype=np.int64)
    for i in range(d - 1):
        smaller = (perms[:, i + 1 :] < perms[:, i : i + 1]).sum(axis=1)
        ranks += smaller * math.factorial(d - 1 - i)
    return ranks


def symmetric_group(d: int) -> Group:
    """Permutations of d points under composition, lexicographic order.

    Composition convention: ``(sigma * tau)(x) = sigma(tau(x))``, so the
    table row is the outer permutation.
    """
    if d < 1:
        raise UsageError(f"symmetric group needs d >= 1, got {d}")
    if d > SYMMETRIC_MAX_DIM:
        raise SizeLimitError(f"symmetric group capped at d <= {SYMMETRIC_MAX_DIM}, got {d}")
    perms = np.array(symmetric_permutations(d), dtype=np.int64)
    n = perms.shape[0]
    mult = np.empty((n, n), dtype=np.int64)
    for j in range(n):
        composed = perms[:, perms[j]]  # sigma(tau(x)) for every sigma
        mult[:, j] = _lehmer_ranks(composed)
    labels = ["".join(str(v) for v in p) for p in perms]
    return Group(mult, labels, "symmetric", (d,))


def product_group(g1: Group, g2: Group) -> Group:
    """Direct product with index packing ``(a, b) -> a * |G2| + b``."""
    o1, o2 = g1.order, g2.order
    n = o1 * o2
    idx = np.arange(n)
    a, b = idx // o2, idx % o2
    mult = g1.mult[a[:, None], a[None, :]] * o2 + g2.mult[b[:, None], b[None, :]]
    labels = [f"({g1.labels[x]},{g2.labels[y]})" for x, y in zip(a, b)]
    return Group(mult, labels, "product", (o1, o2), factors=(g1, g2))


def custom_group(mult, labels=None) -> Group:
    mult = np.asarray(mult, dtype=np.int64)
    if labels is None:
        labels = [str(i) for i in range(mult.shape[0])]
    return Group(mult, labels, "custom", ())


def build_group(family: str, *params) -> Group:
    """Construct a built-in group; see the per-family constructors."""
    if family == "cyclic":
        return cyclic_group(int(params[0]))
    if family in ("sign_flip", "signflip"):
        return sign_flip_group(int(params[0]))
    if family == "dihedral":
        return dihedral_group(int(params[0]))
    if family == "symmetric":
        return symmetric_group(int(params[0]))
    if family == "product":
        if len(params) != 2 or not all(isinstance(p, Group) for p in params):
            raise UsageError("product family takes two Group instances")
        return product_group(params[0], params[1])
    raise UsageError(f"unknown group family {family!r}")


# -- operations -----------------------------------------------------------


def conjugacy_classes(group: Group) -> ConjugacyPartition:
    """Conjugacy classes, ordered by minimal element index."""
    n = group.order
    s = np.arange(n)
    seen = np.zeros(n, dtype=bool)
    classes: list[tuple[int, ...]] = []
    for g in range(n):
        if seen[g]:
            continue
        orbit = np.unique(group.mult[group.mult[:, g], group.inv[s]])
        seen[orbit] = True
        classes.append(tuple(int(x) for x in orbit))
    class_of = np.empty(n, dtype=np.int64)
    for c, members in enumerate(classes):
        for g in members:
            class_of[g] = c
    return ConjugacyPartition(
        classes=tuple(classes),
        representatives=tuple(c[0] for c in classes),
        sizes=tuple(len(c) for c in classes),
        class_of=class_of,
    )


def closure(group: Group, generators: Iterable[int]) -> list[int]:
    """Smallest subgroup containing the given elements.

    Contains the identity, is closed under products and inverses, and is
    the fixed point of repeated pairwise products.
    """
    gens = sorted(set(int(g) for g in generators))
    if not gens:
        raise UsageError("closure needs a nonempty generating set")
    if min(gens) < 0 or max(gens) >= group.order:
        raise UsageError("generator index out of range")
    current = set(gens) | {0} | {int(group.inv[g]) for g in gens}
    while True:
        arr = np.fromiter(current, dtype=np.int64)
        products = np.unique(group.mult[np.ix_(arr, arr)])
        nxt = current | set(int(x) for x in products)
        if nxt == current:
            return sorted(current)
        current = nxt


def sample_uniform(group: Group, n: int, seed) -> np.ndarray:
    """n i.i.d. uniform element indices from a seeded generator."""
    if n < 1:
        raise UsageError(f"sample count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return rng.integers(0, group.order, size=int(n))


# -- serialization --------------------------------------------------------


def group_spec_string(group: Group) -> str:
    """Canonical spec string, parsable by :func:`parse_group_spec`."""
    if group.family == "cyclic":
        return f"cyclic:{group.params[0]}"
    if group.family == "sign_flip":
        return f"signflip:{group.params[0]}"
    if group.family == "dihedral":
        return f"dihedral:{group.params[0]}"
    if group.family == "symmetric":
        return f"symmetric:{group.params[0]}"
    if group.family == "product":
        f1, f2 = group.factors
        return f"product({group_spec_string(f1)},{group_spec_string(f2)})"
    return "custom"


def parse_group_spec(spec: str) -> Group:
    """Parse specs like ``cyclic:12``, ``signflip:6``, ``dihedral:7``,
    ``symmetric:4`` or ``product(cyclic:2,symmetric:3)``."""
    spec = spec.strip()
    if spec.startswith("product(") and spec.endswith(")"):
        inner = spec[len("product(") : -1]
        depth, cut = 0, -1
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                cut = i
                break
        if cut < 0:
            raise UsageError(f"malformed product spec {spec!r}")
        return product_group(parse_group_spec(inner[:cut]), parse_group_spec(inner[cut + 1 :]))
    if ":" not in spec:
        raise UsageError(f"malformed group spec {spec!r}")
    family, _, param = spec.partition(":")
    family = family.strip().lower()
    try:
        value = int(param)
    except ValueError:
        raise UsageError(f"non-integer parameter in group spec {spec!r}") from None
    return build_group(family, value)


def group_to_text(group: Group) -> str:
    """Self-describing text format: header line then the table rows."""
    if group.family == "product":
        param = group_spec_string(group)
    elif group.family == "custom":
        param = "-"
    else:
        param = str(group.params[0])
    lines = [f"group {group.family} {param} {group.order}"]
    for row in group.mult:
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def group_from_text(text: str) -> Group:
    """Inverse of :func:`group_to_text`; round-trip is exact."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 4 or head[0] != "group":
        raise UsageError("malformed group header")
    _, family, param, order_s = head
    order = int(order_s)
    if len(lines) != order + 1:
        raise UsageError("table row count does not match order")
    mult = np.array([[int(x) for x in ln.split()] for ln in lines[1:]], dtype=np.int64)
    if family == "custom":
        return custom_group(mult)
    if family == "product":
        rebuilt = parse_group_spec(param)
    else:
        rebuilt = build_group(family, int(param))
    if not np.array_equal(rebuilt.mult, mult):
        raise UsageError("serialized table disagrees with the named family")
    return rebuilt
