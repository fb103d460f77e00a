"""Ground truth, error metrics, and structured case generation.

Binary32 kernels are measured against a binary64 reference; binary64
results are checked against exact rational arithmetic rounded once.
Case profiles target specific branches of the reciprocal-plan case tree
and reproduce bit-identical streams from their seed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fpenv import FpEnv, Precision, fp_env, gamma
from .plan import CaseTag, StepKind, reciprocal_plan
from .vector import (
    Division,
    StridedVector,
    apply_step,
    naive_div_scale,
)

SQRT2 = math.sqrt(2.0)

VECTOR_LENGTHS = (0, 1, 2, 7, 64)


class ProfileName(enum.Enum):
    SAFE = "safe"
    HUGE_DENOMINATOR = "huge"
    TINY_DENOMINATOR = "tiny"
    MIXED_EXTREME = "mixed"
    SUBNORMAL_PARTS = "subnormal"
    SPECIAL_VALUES = "special"


class Engine(enum.Enum):
    CRSCL = "crscl"
    NAIVE_SMITH = "naive_smith"
    NAIVE_TEXTBOOK = "naive_textbook"


@dataclass(frozen=True)
class CaseProfile:
    name: ProfileName
    seed: int = 0
    count: int = 1000


@dataclass
class ErrorReport:
    samples: int = 0
    excluded: int = 0
    violations: int = 0
    max_rel_err: float = 0.0
    bound: float = 0.0
    max_ulp_re: int = 0
    max_ulp_im: int = 0
    case_histogram: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def included(self) -> int:
        return self.samples - self.excluded


# --------------------------------------------------------------------------
# Reference values
# --------------------------------------------------------------------------


def _to_float(fr) -> float:
    # Rational quotients can exceed the binary64 range even when every
    # operand is representable; round those to the correct infinity.
    try:
        return float(fr)
    except OverflowError:
        return math.inf if fr > 0 else -math.inf


def _rational_quotient(xr, xi, ar, ai):
    fxr, fxi = Fraction(xr), Fraction(xi)
    far, fai = Fraction(ar), Fraction(ai)
    den = far * far + fai * fai
    qr = (fxr * far + fxi * fai) / den
    qi = (fxi * far - fxr * fai) / den
    return qr, qi


def exact_reciprocal_scale(x, a, target: Precision):
    """x/a in wider arithmetic, rounded once to the target precision."""
    xc, ac = complex(x), complex(a)
    if target is Precision.BINARY32:
        with np.errstate(all="ignore"):
            q = np.complex128(xc) / np.complex128(ac)
        return target.ctype(q)
    finite = all(map(math.isfinite, (xc.real, xc.imag, ac.real, ac.imag)))
    if finite and ac != 0:
        qr, qi = _rational_quotient(xc.real, xc.imag, ac.real, ac.imag)
        return target.ctype(complex(_to_float(qr), _to_float(qi)))
    with np.errstate(all="ignore"):
        return target.ctype(np.complex128(xc) / np.complex128(ac))


def _exact_quotients_wide(x: np.ndarray, a, precision: Precision):
    """Unrounded wider-precision quotients for a whole vector."""
    if precision is Precision.BINARY32:
        with np.errstate(all="ignore"):
            return x.astype(np.complex128) / np.complex128(complex(a))
    ac = complex(a)
    out = np.empty(len(x), dtype=np.complex128)
    finite_a = math.isfinite(ac.real) and math.isfinite(ac.imag) and ac != 0
    for i, v in enumerate(x):
        vc = complex(v)
        if finite_a and math.isfinite(vc.real) and math.isfinite(vc.imag):
            qr, qi = _rational_quotient(vc.real, vc.imag, ac.real, ac.imag)
            out[i] = complex(_to_float(qr), _to_float(qi))
        else:
            with np.errstate(all="ignore"):
                out[i] = np.complex128(vc) / np.complex128(ac)
    return out


def relative_error(computed, exact):
    """|computed - exact| / |exact| in wider arithmetic; None when the
    exact value is zero or non-finite (exclusion, not failure)."""
    e = complex(exact)
    if e == 0 or not (math.isfinite(e.real) and math.isfinite(e.imag)):
        return None
    c = complex(computed)
    return math.hypot(c.real - e.real, c.imag - e.imag) / math.hypot(e.real, e.imag)


def relative_error_parts(computed, exact):
    """Per-part variant; each entry is None when that exact part is not a
    usable reference (non-finite), 0.0 when both are zero."""
    c, e = complex(computed), complex(exact)
    out = []
    for cp, ep in ((c.real, e.real), (c.imag, e.imag)):
        if not math.isfinite(ep):
            out.append(None)
        elif ep == 0:
            out.append(0.0 if cp == 0 else math.inf)
        else:
            out.append(abs(cp - ep) / abs(ep))
    return tuple(out)


# --------------------------------------------------------------------------
# ULP distance
# --------------------------------------------------------------------------

_INT_TYPE = {Precision.BINARY32: np.int32, Precision.BINARY64: np.int64}
_FLOAT_BITS = {Precision.BINARY32: np.uint32, Precision.BINARY64: np.uint64}


def _ordered_ints(values: np.ndarray, precision: Precision) -> np.ndarray:
    bits = values.view(_INT_TYPE[precision]).astype(np.int64)
    width = 32 if precision is Precision.BINARY32 else 64
    sign = bits < 0
    mag = bits & ((1 << (width - 1)) - 1)
    return np.where(sign, -mag, mag)


def ulp_distance(p, q, precision: Precision):
    """Representable values strictly between p and q, plus one if p != q.

    None (incomparable) for NaNs or operands of opposite nonzero sign.
    """
    fp = precision.ftype(p)
    fq = precision.ftype(q)
    if np.isnan(fp) or np.isnan(fq):
        return None
    if (fp < 0 < fq) or (fq < 0 < fp):
        return None
    arr = np.array([fp, fq], dtype=precision.ftype)
    o = _ordered_ints(arr, precision)
    return int(abs(o[0] - o[1]))


def _ulp_distance_array(p: np.ndarray, q: np.ndarray, precision: Precision):
    """Vectorized distance; -1 marks incomparable pairs."""
    op = _ordered_ints(np.ascontiguousarray(p), precision)
    oq = _ordered_ints(np.ascontiguousarray(q), precision)
    d = np.abs(op - oq)
    bad = np.isnan(p) | np.isnan(q) | ((p < 0) & (q > 0)) | ((q < 0) & (p > 0))
    return np.where(bad, -1, d)


# --------------------------------------------------------------------------
# Case generation
# --------------------------------------------------------------------------

_ZERO_PART_SHARE = 0.15  # share of draws routed through a zero-part axis case


def _special_values(env: FpEnv):
    base = [
        0.0,
        float(env.min_subnormal),
        float(env.sfmin),
        1.0,
        float(env.inv_sfmin),
        float(env.overflow),
        math.inf,
    ]
    vals = []
    for v in base:
        vals.append(v)
        vals.append(-v)
    vals.append(math.nan)
    return vals


def _ldexp_cast(mant, expo, ftype):
    return ftype(np.ldexp(mant, expo))


def _draw(rng, ftype, emin, emax, sign=True):
    m = 1.0 + rng.random()
    e = int(rng.integers(emin, emax + 1))
    s = -1.0 if (sign and rng.integers(0, 2)) else 1.0
    return _ldexp_cast(s * m, e, ftype)


def _profile_limits(precision: Precision):
    if precision is Precision.BINARY32:
        return dict(emax=127, emin_n=-126, emin_s=-149)
    return dict(emax=1023, emin_n=-1022, emin_s=-1074)


def _draw_denominator(rng, name: ProfileName, env: FpEnv, lim):
    f = env.ftype
    emax, emin_n, emin_s = lim["emax"], lim["emin_n"], lim["emin_s"]
    if name is ProfileName.SAFE:
        half = emax // 2
        return _draw(rng, f, -half, half), _draw(rng, f, -half, half)
    if name is ProfileName.HUGE_DENOMINATOR:
        if rng.integers(0, 2):
            return (
                _draw(rng, f, emax - 3, emax - 1),
                _draw(rng, f, emax - 3, emax - 1),
            )
        small = _draw(rng, f, -10, 10)
        big = _draw(rng, f, 3 * emax // 4, emax - 1)
        return (small, big) if rng.integers(0, 2) else (big, small)
    if name is ProfileName.TINY_DENOMINATOR:
        # Balanced parts well below sfmin, so |ur| (or |ui|) < sfmin holds.
        e0 = int(rng.integers(emin_s + 4, emin_n - 7))
        d = int(rng.integers(-1, 2))
        s0 = -1.0 if rng.integers(0, 2) else 1.0
        s1 = -1.0 if rng.integers(0, 2) else 1.0
        return (
            _ldexp_cast(s0 * (1.0 + rng.random()), e0, f),
            _ldexp_cast(s1 * (1.0 + rng.random()), e0 + d, f),
        )
    if name is ProfileName.MIXED_EXTREME:
        tiny = _draw(rng, f, emin_s + 5, emin_n + 20)
        huge = _draw(rng, f, emax - 60, emax - 1)
        return (tiny, huge) if rng.integers(0, 2) else (huge, tiny)
    # SUBNORMAL_PARTS
    return (
        _draw(rng, f, emin_s, emin_n - 1),
        _draw(rng, f, emin_s, emin_n - 1),
    )


def _draw_vector(rng, env: FpEnv, n: int) -> np.ndarray:
    f = env.ftype
    mants = 1.0 + rng.random(n)
    expos = rng.integers(-16, 17, size=n)
    signs = np.where(rng.integers(0, 2, size=n), -1.0, 1.0)
    re = np.ldexp(signs * mants, expos).astype(f)
    mants = 1.0 + rng.random(n)
    expos = rng.integers(-16, 17, size=n)
    signs = np.where(rng.integers(0, 2, size=n), -1.0, 1.0)
    im = np.ldexp(signs * mants, expos).astype(f)
    out = np.zeros(n, dtype=env.ctype)
    out.real = re
    out.imag = im
    return out


def gen_cases(profile: CaseProfile, precision: Precision):
    """Deterministic stream of (a, x) pairs for one profile."""
    env = fp_env(precision)
    rng = np.random.default_rng(profile.seed)
    lim = _profile_limits(precision)

    if profile.name is ProfileName.SPECIAL_VALUES:
        vals = _special_values(env)
        pairs = [(re, im) for re in vals for im in vals]
        emitted = 0
        while emitted < profile.count:
            for re, im in pairs:
                if emitted >= profile.count:
                    break
                n = int(rng.choice(VECTOR_LENGTHS))
                a = env.ctype(complex(re, im))
                yield a, _draw_vector(rng, env, n)
                emitted += 1
        return

    tiny_axis_hi = lim["emin_n"] - 1  # exponents that force the scaled axis path
    for k in range(profile.count):
        if rng.random() < _ZERO_PART_SHARE:
            # Axis case: one part exactly zero.
            if profile.name is ProfileName.TINY_DENOMINATOR:
                v = _draw(rng, env.ftype, lim["emin_s"] + 2, tiny_axis_hi)
            else:
                v = _draw(rng, env.ftype, -lim["emax"] // 2, lim["emax"] // 2)
            zero = math.copysign(0.0, 1 if rng.integers(0, 2) else -1)
            re, im = (v, zero) if k % 2 == 0 else (zero, v)
        else:
            re, im = _draw_denominator(rng, profile.name, env, lim)
        a = env.ctype(complex(float(re), float(im)))
        n = int(rng.choice(VECTOR_LENGTHS))
        yield a, _draw_vector(rng, env, n)


# --------------------------------------------------------------------------
# Differential measurement
# --------------------------------------------------------------------------

_AXIS_CASES = (CaseTag.REAL_DENOMINATOR, CaseTag.IMAGINARY_DENOMINATOR)


def _uv_chain_dirty(a, env: FpEnv) -> bool:
    """True when building ur/ui rounded inexactly in the subnormal range.

    The gamma-style bounds assume the standard rounding model, which does
    not hold for subnormal results; a subnormal intermediate is harmless
    only when it is exact.  Exactness is checked against a binary64
    recomputation of the same chain.
    """
    ar = env.ftype(complex(a).real)
    ai = env.ftype(complex(a).imag)
    if ar == 0 or ai == 0:
        return False
    if min(abs(float(ar)), abs(float(ai))) >= float(env.sfmin):
        return False
    with np.errstate(all="ignore"):
        r1 = ai / ar
        t1 = ai * r1
        ur = ar + t1
        r2 = ar / ai
        t2 = ar * r2
        ui = ai + t2
        a6r, a6i = float(ar), float(ai)
        w1 = a6i / a6r
        w = [w1, a6i * w1, a6r + a6i * w1]
        w2 = a6r / a6i
        w += [w2, a6r * w2, a6i + a6r * w2]
    sfmin = float(env.sfmin)
    for v32, v64 in zip((r1, t1, ur, r2, t2, ui), w):
        v = float(v32)
        if 0 < abs(v) < sfmin and v != v64:
            return True
    return False


def _plan_factors_finite(plan) -> bool:
    for s in plan.steps:
        if not (np.isfinite(s.re) and np.isfinite(s.im)):
            return False
    return True


def _run_crscl_with_plan(x: np.ndarray, plan, env: FpEnv):
    """Apply the plan, returning the result and a mask of elements whose
    two-step intermediate left the normal range (bound not applicable)."""
    y = x.copy()
    sv = StridedVector.wrap(y)
    bad_mid = np.zeros(len(x), dtype=bool)
    for idx, step in enumerate(plan.steps):
        apply_step(sv, step)
        if idx == 0 and len(plan.steps) == 2 and len(x):
            for part in (y.real, y.imag):
                ap = np.abs(part)
                bad_mid |= ~np.isfinite(part) | ((ap != 0) & (ap < env.sfmin))
    return y, bad_mid


def error_report(engine: Engine, profile: CaseProfile, precision: Precision) -> ErrorReport:
    """Run the engine over the profile's stream and compare against the
    wider-precision reference, aggregating bound conformance."""
    env = fp_env(precision)
    g2 = gamma(2, env)
    bound_full = SQRT2 * gamma(6, env)
    min_normal = float(env.sfmin)
    rep = ErrorReport(bound=bound_full)
    hist = {tag: 0 for tag in CaseTag}

    for a, x in gen_cases(profile, precision):
        n = len(x)
        rep.samples += n
        if n == 0:
            continue
        plan = reciprocal_plan(a, env)
        hist[plan.case] += n
        axis = plan.case in _AXIS_CASES

        y_plan, bad_mid = _run_crscl_with_plan(x, plan, env)
        if engine is Engine.CRSCL:
            y = y_plan
        else:
            y = x.copy()
            division = Division.SMITH if engine is Engine.NAIVE_SMITH else Division.TEXTBOOK
            naive_div_scale(StridedVector.wrap(y), a, division, env)

        exact = _exact_quotients_wide(x, a, precision)
        with np.errstate(all="ignore"):
            ex_re, ex_im = exact.real, exact.imag
            # The reference must be representable in the target precision:
            # quotients that overflow the target are outside the bound's
            # validity region even when finite in the wider arithmetic.
            finite_exact = (
                np.isfinite(ex_re.astype(precision.ftype))
                & np.isfinite(ex_im.astype(precision.ftype))
            )
            mod = np.hypot(np.where(finite_exact, ex_re, 0.0), np.where(finite_exact, ex_im, 0.0))
            x_zero = (x.real == 0) & (x.imag == 0)
            x_bad = ~(np.isfinite(x.real) & np.isfinite(x.imag))
            exclude = x_zero | x_bad | ~finite_exact | (mod < min_normal) | bad_mid
            if not _plan_factors_finite(plan) or _uv_chain_dirty(a, env):
                exclude |= True
            if axis:
                for part in (ex_re, ex_im):
                    ap = np.abs(part)
                    exclude |= np.isfinite(part) & (ap != 0) & (ap < min_normal)

            included = ~exclude
            rep.excluded += int(np.count_nonzero(exclude))
            if not included.any():
                continue

            yr = y.real.astype(np.float64)
            yi = y.imag.astype(np.float64)
            if axis:
                err_re = np.where(ex_re != 0, np.abs(yr - ex_re) / np.abs(ex_re), np.where(yr == 0, 0.0, np.inf))
                err_im = np.where(ex_im != 0, np.abs(yi - ex_im) / np.abs(ex_im), np.where(yi == 0, 0.0, np.inf))
                err = np.maximum(err_re, err_im)
                bound = g2
            else:
                err = np.hypot(yr - ex_re, yi - ex_im) / mod
                bound = bound_full
            err = np.where(included, err, 0.0)
            bad = included & ~np.isfinite(err)
            err = np.where(bad, np.inf, err)

            rep.max_rel_err = max(rep.max_rel_err, float(np.max(err)))
            viol = included & (err > bound)
            nviol = int(np.count_nonzero(viol))
            if nviol:
                rep.violations += nviol
                _record_failures(rep, a, x, y, exact, err, viol, precision)

            # ULP statistics against the once-rounded reference.
            ex_t_re = ex_re.astype(precision.ftype)
            ex_t_im = ex_im.astype(precision.ftype)
            d_re = _ulp_distance_array(y.real, ex_t_re, precision)
            d_im = _ulp_distance_array(y.imag, ex_t_im, precision)
            d_re = np.where(included, d_re, -1)
            d_im = np.where(included, d_im, -1)
            rep.max_ulp_re = max(rep.max_ulp_re, int(np.max(d_re, initial=-1)))
            rep.max_ulp_im = max(rep.max_ulp_im, int(np.max(d_im, initial=-1)))

    rep.max_ulp_re = max(rep.max_ulp_re, 0)
    rep.max_ulp_im = max(rep.max_ulp_im, 0)
    rep.case_histogram = {tag.value: c for tag, c in hist.items() if c}
    return rep


_MAX_RECORDED_FAILURES = 100


def _record_failures(rep, a, x, y, exact, err, viol, precision):
    from .hexfloat import format_hex

    idxs = np.nonzero(viol)[0]
    for i in idxs:
        if len(rep.failures) >= _MAX_RECORDED_FAILURES:
            return
        rep.failures.append(
            {
                "a": [format_hex(complex(a).real), format_hex(complex(a).imag)],
                "x": [format_hex(x[i].real), format_hex(x[i].imag)],
                "computed": [format_hex(y[i].real), format_hex(y[i].imag)],
                "exact": [format_hex(exact[i].real), format_hex(exact[i].imag)],
                "rel_err": format_hex(err[i]),
            }
        )
