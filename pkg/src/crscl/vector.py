"""Strided in-place scaling kernels and the rscl/crscl entry points.

All kernels follow BLAS SCAL calling conventions: they mutate the
addressed elements of a caller-owned buffer and never touch anything
else.  Flop counters are optional and cost nothing when absent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .fpenv import FpEnv, fp_env, Precision
from .plan import (
    CaseTag,
    ScalePlan,
    ScaleStep,
    StepKind,
    as_parts,
    reciprocal_plan,
    _axis_steps,
)


class Division(enum.Enum):
    SMITH = "smith"
    TEXTBOOK = "textbook"


@dataclass
class FlopCounter:
    real_mul: int = 0
    real_add: int = 0
    real_div: int = 0
    complex_mul: int = 0
    complex_div: int = 0

    def total_real_ops(self) -> int:
        return self.real_mul + self.real_add + self.real_div


@dataclass
class StridedVector:
    """A view selecting n elements of a complex buffer at a fixed stride."""

    data: np.ndarray
    offset: int = 0
    stride: int = 1
    n: int | None = None

    def __post_init__(self):
        if self.data.ndim != 1:
            raise ValueError("buffer must be one-dimensional")
        if self.n is None:
            self.n = len(self.data)
        if self.stride < 1 or self.offset < 0:
            raise ValueError("stride must be positive and offset non-negative")
        if self.n < 0:
            raise ValueError("length must be non-negative")
        if self.n > 0 and self.offset + (self.n - 1) * self.stride >= len(self.data):
            raise ValueError("stride pattern exceeds the buffer")

    @classmethod
    def wrap(cls, data: np.ndarray) -> "StridedVector":
        return cls(data)

    def view(self) -> np.ndarray:
        end = self.offset + self.n * self.stride if self.n > 0 else self.offset
        return self.data[self.offset : end : self.stride]


def scal_real(x: StridedVector, c, counter: FlopCounter | None = None) -> None:
    """(re, im) <- (re*c, im*c) for each addressed element."""
    v = x.view()
    with np.errstate(all="ignore"):
        v.real = v.real * c
        v.imag = v.imag * c
    if counter is not None:
        counter.real_mul += 2 * x.n


def scal_imaginary(x: StridedVector, t, counter: FlopCounter | None = None) -> None:
    """Multiply each addressed element by (0 + t*i): (re, im) <- (-im*t, re*t).

    No zero products are formed, so a finite*infinite element never turns
    into NaN here, unlike a generic complex multiply by (0, t).
    """
    v = x.view()
    with np.errstate(all="ignore"):
        new_re = -(v.imag * t)
        new_im = v.real * t
        v.real = new_re
        v.imag = new_im
    if counter is not None:
        counter.real_mul += 2 * x.n


def scal_complex(x: StridedVector, cr, ci, counter: FlopCounter | None = None) -> None:
    """Conventional 4-multiply/2-add complex product with (cr + ci*i)."""
    v = x.view()
    with np.errstate(all="ignore"):
        re = v.real
        im = v.imag
        new_re = (re * cr) - (im * ci)
        new_im = (re * ci) + (im * cr)
        v.real = new_re
        v.imag = new_im
    if counter is not None:
        counter.real_mul += 4 * x.n
        counter.real_add += 2 * x.n


def apply_step(x: StridedVector, step: ScaleStep, counter: FlopCounter | None = None) -> None:
    if step.kind is StepKind.REAL_FACTOR:
        scal_real(x, step.re, counter)
    elif step.kind is StepKind.IMAGINARY_FACTOR:
        scal_imaginary(x, step.im, counter)
    else:
        scal_complex(x, step.re, step.im, counter)


def apply_plan(x: StridedVector, plan: ScalePlan, counter: FlopCounter | None = None) -> None:
    for step in plan.steps:
        apply_step(x, step, counter)


def rscl(x: StridedVector, a, env: FpEnv, counter: FlopCounter | None = None) -> None:
    """Scale x by the reciprocal of the real number a."""
    with np.errstate(all="ignore"):
        av = env.ftype(a)
    steps, divs = _axis_steps(av, env, lambda v: ScaleStep.real(v))
    if counter is not None:
        counter.real_div += divs
    for step in steps:
        apply_step(x, step, counter)


def crscl(x: StridedVector, a, env: FpEnv, counter: FlopCounter | None = None) -> ScalePlan:
    """Scale x by the reciprocal of the complex number a, without complex
    division and with at most four real divisions."""
    plan = reciprocal_plan(a, env)
    if counter is not None:
        counter.real_div += plan.division_count
    apply_plan(x, plan, counter)
    return plan


def smith_quotient(nr, ni, dr, di):
    """Smith's scaled-ratio division: (nr + ni*i) / (dr + di*i).

    Numerator parts may be arrays; the denominator is a scalar pair.  All
    arithmetic stays in the operands' precision.
    """
    with np.errstate(all="ignore"):
        if abs(dr) >= abs(di):
            r = di / dr
            den = dr + di * r
            return (nr + ni * r) / den, (ni - nr * r) / den
        r = dr / di
        den = di + dr * r
        return (nr * r + ni) / den, (ni * r - nr) / den


def textbook_quotient(nr, ni, dr, di):
    """Schoolbook division through dr**2 + di**2."""
    with np.errstate(all="ignore"):
        den = dr * dr + di * di
        return (nr * dr + ni * di) / den, (ni * dr - nr * di) / den


# Per-element real-op cost of one naive division, for flop accounting:
# Smith needs r, den and two quotients; textbook squares the denominator.
_NAIVE_COST = {
    Division.SMITH: dict(real_mul=3, real_add=3, real_div=3),
    Division.TEXTBOOK: dict(real_mul=6, real_add=3, real_div=2),
}


def naive_div_scale(
    x: StridedVector,
    a,
    division: Division,
    env: FpEnv | None = None,
    counter: FlopCounter | None = None,
) -> None:
    """Reference engine: divide each element by a, one complex division per
    element, using the selected division algorithm."""
    if env is None:
        precision = Precision.BINARY32 if x.data.dtype == np.complex64 else Precision.BINARY64
        env = fp_env(precision)
    dr, di = as_parts(a, env)
    v = x.view()
    with np.errstate(all="ignore"):
        nr = v.real.copy()
        ni = v.imag.copy()
        if division is Division.SMITH:
            qr, qi = smith_quotient(nr, ni, dr, di)
        else:
            qr, qi = textbook_quotient(nr, ni, dr, di)
        v.real = qr
        v.imag = qi
    if counter is not None:
        n = x.n
        cost = _NAIVE_COST[division]
        counter.real_mul += cost["real_mul"] * n
        counter.real_add += cost["real_add"] * n
        counter.real_div += cost["real_div"] * n
        counter.complex_div += n


# Expected (real_mul + real_add) per element for each case, used by the
# conformance tests and the benchmark report.
PER_ELEMENT_FLOPS = {
    CaseTag.REAL_DENOMINATOR: {1: 2, 2: 4},
    CaseTag.IMAGINARY_DENOMINATOR: {1: 2, 2: 4},
    CaseTag.FULL_SAFE: {1: 6},
    CaseTag.FULL_SMALL: {2: 8},
    CaseTag.FULL_INF_OPERAND: {1: 6},
    CaseTag.FULL_INF_RESCUE: {2: 8},
    CaseTag.FULL_LARGE: {2: 8},
}
