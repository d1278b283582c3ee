"""Module containing the exhaustive and statistical privacy audits of encoding families."""

from __future__ import annotations

import json
import logging

from collections import Counter
from enum import Enum
from fractions import Fraction

import numpy as np

from scipy.stats import chi2

from .encodings import is_product_compatible
from .errors import InvalidArgumentsException
from .family import FamilyE, build_family
from .field import FpElem
from .protocol import ProtocolConfig, async_run_protocol
from .qudit import BellLabel
from .seeding import make_rng

_LOGGER = logging.getLogger(__name__)

_SIGNIFICANCE = 0.01
_MIN_EMPIRICAL_RUNS = 1000


class ProductClass(Enum):
    """ProductClass enumeration splitting targets by whether their product is zero."""

    ZERO = "zero"
    NONZERO = "nonzero"

    @classmethod
    def of(cls, label: BellLabel) -> ProductClass:
        return cls.ZERO if label.product() == 0 else cls.NONZERO


def fiber(v: FpElem | int, p: int) -> list[tuple[int, int]]:
    """All input pairs (i, j) with i * j = v, in row-major order."""

    v = int(v) % p
    return [(i, j) for i in range(p) for j in range(p) if (i * j) % p == v]


class TargetAudit:
    """Preimage counts of one target label over the fiber of its product, and their common value c if there is one."""

    def __init__(self, target: BellLabel, counts: dict[tuple[int, int], int]) -> None:
        self._target = target
        self._counts = counts

        values = set(counts.values())
        value = values.pop() if len(values) == 1 else 0
        self._c = value if value > 0 else None

    @property
    def target(self) -> BellLabel:
        return self._target

    @property
    def counts(self) -> dict[tuple[int, int], int]:
        return self._counts

    @property
    def c(self) -> int | None:
        """Common positive count, None when counts differ or are all zero."""

        return self._c

    def as_dict(self) -> dict:
        return {
            "target": list(self._target.as_tuple()),
            "counts": [[list(pair), n] for pair, n in self._counts.items()],
            "c": self._c,
        }


class AuditReport:
    """AuditReport model representing the outcome of the exhaustive counting check on a family."""

    def __init__(
        self,
        p: int,
        family_size: int,
        per_target: dict[BellLabel, TargetAudit],
        product_compatible: bool,
    ) -> None:
        self._p = p
        self._family_size = family_size
        self._per_target = per_target
        self._product_compatible = product_compatible

    @property
    def p(self) -> int:
        return self._p

    @property
    def family_size(self) -> int:
        return self._family_size

    @property
    def per_target(self) -> dict[BellLabel, TargetAudit]:
        return self._per_target

    @property
    def product_compatible(self) -> bool:
        return self._product_compatible

    @property
    def class_constants(self) -> dict[ProductClass, int | None]:
        """The constant shared by all targets of a class, None when the targets disagree."""

        constants = {}
        for product_class in ProductClass:
            values = {audit.c for target, audit in self._per_target.items() if ProductClass.of(target) == product_class}
            constants[product_class] = values.pop() if len(values) == 1 else None
        return constants

    @property
    def passed(self) -> bool:
        return self._product_compatible and all(audit.c is not None for audit in self._per_target.values())

    def as_dict(self) -> dict:
        return {
            "p": self._p,
            "family_size": self._family_size,
            "per_target": [audit.as_dict() for audit in self._per_target.values()],
            "class_constants": {k.value: v for k, v in self.class_constants.items()},
            "passed": self.passed,
        }

    def serialize(self) -> str:
        """Serialize report into a JSON string."""

        return json.dumps(self.as_dict())


def _count_tensor(f: FamilyE) -> np.ndarray:
    # counts[a, b, i, j] = number of members mapping (i, j) to (a, b)
    p = f.p
    counts = np.zeros((p, p, p, p), dtype=np.int64)
    if not f.members:
        return counts

    tables = np.stack([e.table for e in f.members])
    i, j = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    i, j = np.broadcast_to(i, tables.shape[:3]), np.broadcast_to(j, tables.shape[:3])

    np.add.at(counts, (tables[..., 0], tables[..., 1], i, j), 1)
    return counts


def _target_counts(counts: np.ndarray, target: BellLabel) -> dict[tuple[int, int], int]:
    a, b = target.as_tuple()
    return {(i, j): int(counts[a, b, i, j]) for i, j in fiber(target.product(), target.p)}


def preimage_counts(f: FamilyE, target: BellLabel) -> dict[tuple[int, int], int]:
    """For each (i, j) in the fiber of the target's product, the number of members mapping (i, j) to the target."""

    if target.p != f.p:
        raise InvalidArgumentsException("Target belongs to a different field.", target=target, p=f.p)

    return _target_counts(_count_tensor(f), target)


def check_def3(f: FamilyE) -> AuditReport:
    """
    Checks that every member is product-compatible and every target is hit equally often from each input pair of its fiber.

    Works on the tables only; ids attached to members are ignored.
    """

    counts = _count_tensor(f)
    per_target = {}
    for a in range(f.p):
        for b in range(f.p):
            target = BellLabel(a, b, f.p)
            per_target[target] = TargetAudit(target, _target_counts(counts, target))

    report = AuditReport(f.p, len(f), per_target, all(map(is_product_compatible, f.members)))

    _LOGGER.debug("Audit at p=%d over %d members: passed=%s", f.p, len(f), report.passed)
    return report


def verify_private_family(f: FamilyE) -> AuditReport:
    return check_def3(f)


class DistTable:
    """Exact distribution of the label a uniformly chosen member assigns to one input pair."""

    def __init__(self, input: tuple[int, int], distribution: dict[BellLabel, Fraction]) -> None:
        self._input = input
        self._distribution = distribution

    @property
    def input(self) -> tuple[int, int]:
        return self._input

    @property
    def distribution(self) -> dict[BellLabel, Fraction]:
        return self._distribution

    def __getitem__(self, label: BellLabel) -> Fraction:
        return self._distribution.get(label, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistTable):
            return False
        return self._distribution == other._distribution

    def as_dict(self) -> dict:
        return {
            "input": list(self._input),
            "distribution": [[list(label.as_tuple()), str(q)] for label, q in sorted(self._distribution.items())],
        }


def output_distribution(f: FamilyE, input: tuple[int, int]) -> DistTable:
    if not f.members:
        raise InvalidArgumentsException("Distribution over an empty family is undefined.", p=f.p)

    i, j = (int(v) % f.p for v in input)
    labels = Counter(e.label(i, j) for e in f.members)
    size = len(f)

    return DistTable((i, j), {label: Fraction(n, size) for label, n in labels.items()})


def privacy_equivalence(f: FamilyE) -> bool:
    """True iff all input pairs with the same product induce the same label distribution."""

    for v in range(f.p):
        pairs = fiber(v, f.p)
        first = output_distribution(f, pairs[0])
        if any(output_distribution(f, pair) != first for pair in pairs[1:]):
            return False
    return True


class ChiSquareResult:
    """Pearson chi-square goodness of fit of observed protocol outcomes against the exact distribution."""

    def __init__(self, statistic: float, degrees_of_freedom: int, threshold: float) -> None:
        self._statistic = statistic
        self._degrees_of_freedom = degrees_of_freedom
        self._threshold = threshold

    @property
    def statistic(self) -> float:
        return self._statistic

    @property
    def degrees_of_freedom(self) -> int:
        return self._degrees_of_freedom

    @property
    def threshold(self) -> float:
        return self._threshold

    @property
    def passed(self) -> bool:
        return self._statistic <= self._threshold

    def as_dict(self) -> dict:
        return {
            "statistic": self._statistic,
            "degrees_of_freedom": self._degrees_of_freedom,
            "threshold": self._threshold,
            "passed": self.passed,
        }


def chi_square(observed: Counter, expected: dict, n: int) -> ChiSquareResult:
    """
    Compares observed cell counts to expected cell probabilities at significance 0.01.

    An observation in a cell with zero expected probability fails the test outright.
    """

    if any(cell not in expected or expected[cell] == 0 for cell in observed):
        return ChiSquareResult(float("inf"), 0, 0.0)

    cells = [cell for cell, q in expected.items() if q > 0]
    statistic = 0.0
    for cell in cells:
        e = n * float(expected[cell])
        statistic += (observed.get(cell, 0) - e) ** 2 / e

    df = len(cells) - 1
    threshold = float(chi2.ppf(1 - _SIGNIFICANCE, df)) if df > 0 else 0.0

    return ChiSquareResult(statistic, df, threshold)


async def async_empirical_chi_square(
    n_runs: int,
    config: ProtocolConfig,
    rng: np.random.Generator | int | None = None,
    product: int = 0,
) -> ChiSquareResult:
    """
    Runs the protocol n_runs times on inputs drawn uniformly from the fiber of product and tests the joint
    (input, measured label) counts against the exact distribution of the full family.
    """

    if n_runs < _MIN_EMPIRICAL_RUNS:
        raise InvalidArgumentsException("Empirical audit needs at least 1000 runs.", n_runs=n_runs)

    rng = make_rng(rng)
    p = config.p
    inputs = fiber(product, p)
    family = build_family(p, config.alpha)

    expected = {}
    for pair in inputs:
        for label, q in output_distribution(family, pair).distribution.items():
            expected[(pair, label.as_tuple())] = q / len(inputs)

    observed = Counter()
    for _ in range(n_runs):
        pair = inputs[int(rng.integers(len(inputs)))]
        transcript = await async_run_protocol(pair[0], pair[1], config, rng)
        observed[(pair, transcript.measured_label.as_tuple())] += 1

    result = chi_square(observed, expected, n_runs)

    _LOGGER.debug(
        "Chi-square at p=%d product=%d over %d runs: statistic=%f df=%d threshold=%f",
        p, product, n_runs, result.statistic, result.degrees_of_freedom, result.threshold,
    )
    return result
