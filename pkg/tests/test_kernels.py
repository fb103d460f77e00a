import math

import numpy as np
import pytest

from crscl import (
    Division,
    FlopCounter,
    Precision,
    StridedVector,
    crscl,
    fp_env,
    naive_div_scale,
    rscl,
    scal_complex,
    scal_imaginary,
    scal_real,
)

ENV32 = fp_env(Precision.BINARY32)
ENV64 = fp_env(Precision.BINARY64)


def cvec(vals, env=ENV32):
    return np.array(vals, dtype=env.ctype)


class TestStridedVector:
    def test_validates_shape(self):
        with pytest.raises(ValueError):
            StridedVector(np.zeros((2, 2), dtype=np.complex64))

    def test_validates_extent(self):
        with pytest.raises(ValueError):
            StridedVector(np.zeros(4, dtype=np.complex64), offset=1, stride=2, n=3)

    def test_view_is_writable_alias(self):
        buf = cvec([1, 2, 3, 4, 5])
        v = StridedVector(buf, offset=1, stride=2, n=2)
        v.view()[:] = 0
        assert list(buf) == [1, 0, 3, 0, 5]

    def test_untouched_elements_are_bit_identical(self):
        buf = cvec([1 + 2j, 3 + 4j, 5 + 6j, 7 + 8j, 9 + 10j])
        before = buf.copy()
        v = StridedVector(buf, offset=0, stride=2, n=3)
        scal_real(v, np.float32(2.0))
        assert np.array_equal(buf[[1, 3]].view(np.uint64), before[[1, 3]].view(np.uint64))
        assert list(buf[[0, 2, 4]]) == [2 + 4j, 10 + 12j, 18 + 20j]


class TestKernels:
    def test_scal_real(self):
        x = cvec([1 + 2j, -3 + 4j])
        c = FlopCounter()
        scal_real(StridedVector.wrap(x), np.float32(0.5), c)
        assert list(x) == [0.5 + 1j, -1.5 + 2j]
        assert c.real_mul == 4 and c.real_add == 0

    def test_scal_imaginary(self):
        # (3+4i) * 0.25i = -1 + 0.75i
        x = cvec([3 + 4j])
        scal_imaginary(StridedVector.wrap(x), np.float32(0.25))
        assert x[0] == np.complex64(-1 + 0.75j)

    def test_scal_imaginary_avoids_nan_on_infinite_element(self):
        # An infinite part must not meet a zero multiplier: no 0*Inf NaN.
        x = cvec([complex(math.inf, 0.0)])
        scal_imaginary(StridedVector.wrap(x), np.float32(-0.5))
        assert x[0].real == 0.0
        assert x[0].imag == -math.inf

    def test_scal_complex(self):
        x = cvec([2 + 1j], ENV64)
        c = FlopCounter()
        scal_complex(StridedVector.wrap(x), 3.0, -2.0, c)
        assert x[0] == complex(2 + 1j) * complex(3, -2)
        assert c.real_mul == 4 and c.real_add == 2


class TestRscl:
    def test_safe_divisor(self):
        x = cvec([4 + 8j])
        rscl(StridedVector.wrap(x), 4.0, ENV32)
        assert x[0] == np.complex64(1 + 2j)

    def test_tiny_divisor_reaches_huge_result(self):
        # 2^-20 / 2^-140 = 2^120: a plain 1/a would overflow to Inf.
        x = cvec([complex(2.0**-20, 0.0)])
        rscl(StridedVector.wrap(x), np.float32(2.0**-140), ENV32)
        assert x[0].real == np.float32(2.0**120)

    def test_huge_divisor_reaches_subnormal_result(self):
        # 1 / 2^127: the result 2^-127 is subnormal yet exact.
        x = cvec([1 + 0j])
        rscl(StridedVector.wrap(x), np.float32(2.0**127), ENV32)
        assert x[0].real == np.float32(2.0**-127)

    def test_counts_one_division(self):
        for a in (3.0, 2.0**-140, 2.0**127):
            c = FlopCounter()
            x = cvec([1 + 1j, 2 + 2j])
            rscl(StridedVector.wrap(x), np.float32(a), ENV32, c)
            assert c.real_div == 1
            assert c.complex_div == 0


class TestCrscl:
    def test_exact_quotient_power_of_two_denominator(self):
        # ur = ui = 2 exactly for a = 1+1i, so the whole plan is exact:
        # [2, 2i] / (1+1i) = [1-1i, 1+1i].
        x = cvec([2 + 0j, 2j], ENV64)
        crscl(StridedVector.wrap(x), complex(1, 1), ENV64)
        assert x[0] == 1 - 1j
        assert x[1] == 1 + 1j

    def test_safe_quotient_close_to_reference(self):
        x = cvec([25 + 0j, 25j], ENV64)
        crscl(StridedVector.wrap(x), complex(3, 4), ENV64)
        assert x[0] == pytest.approx(3 - 4j, rel=1e-14)
        assert x[1] == pytest.approx(4 + 3j, rel=1e-14)

    def test_division_budget(self):
        c = FlopCounter()
        x = cvec([1 + 1j] * 8)
        crscl(StridedVector.wrap(x), complex(2.0**127, 2.0**127), ENV32, c)
        assert c.real_div <= 4
        assert c.complex_div == 0

    def test_huge_denominator_no_spurious_zero(self):
        # 1/(2^127+2^127i) has normal parts; naive engines flush them.
        a = complex(2.0**127, 2.0**127)
        x = cvec([1 + 0j])
        crscl(StridedVector.wrap(x), a, ENV32)
        assert x[0].real != 0 and x[0].imag != 0
        q = 1.0 / a
        assert float(x[0].real) == pytest.approx(q.real, rel=1e-6)
        assert float(x[0].imag) == pytest.approx(q.imag, rel=1e-6)

    def test_tiny_denominator_no_spurious_overflow(self):
        # Quotient modulus ~2^119: representable, but 1/ur alone overflows.
        a = complex(2.0**-130, 2.0**-130)
        x = cvec([complex(2.0**-10 * 0.5, 2.0**-10 * 0.25)])
        crscl(StridedVector.wrap(x), a, ENV32)
        assert np.isfinite(x[0].real) and np.isfinite(x[0].imag)
        q = complex(2.0**-10 * 0.5, 2.0**-10 * 0.25) / a
        assert float(x[0].real) == pytest.approx(q.real, rel=1e-6)
        assert float(x[0].imag) == pytest.approx(q.imag, rel=1e-6)

    def test_empty_vector(self):
        x = cvec([])
        plan = crscl(StridedVector.wrap(x), complex(3, 4), ENV32)
        assert len(x) == 0
        assert plan.division_count <= 4


class TestNaiveEngines:
    def test_smith_matches_reference_in_safe_range(self):
        x = cvec([1.5 - 2.25j, -0.75 + 3j], ENV64)
        a = complex(3, 4)
        naive_div_scale(StridedVector.wrap(x), a, Division.SMITH, ENV64)
        assert x[0] == pytest.approx(complex(1.5, -2.25) / a, rel=1e-15)

    def test_textbook_matches_reference_in_safe_range(self):
        x = cvec([1.5 - 2.25j], ENV64)
        a = complex(3, 4)
        naive_div_scale(StridedVector.wrap(x), a, Division.TEXTBOOK, ENV64)
        assert x[0] == pytest.approx(complex(1.5, -2.25) / a, rel=1e-15)

    def test_smith_flushes_huge_denominator(self):
        # The failure signature crscl exists to fix: quotient flushed to 0.
        a = complex(2.0**127, 2.0**127)
        x = cvec([complex(2.0**127, 0.0)])
        naive_div_scale(StridedVector.wrap(x), a, Division.SMITH, ENV32)
        assert x[0] == 0

    def test_counts_complex_divisions(self):
        c = FlopCounter()
        x = cvec([1 + 1j] * 5)
        naive_div_scale(StridedVector.wrap(x), complex(3, 4), Division.SMITH, ENV32, c)
        assert c.complex_div == 5
        assert c.real_div == 15  # 3 per element for Smith
