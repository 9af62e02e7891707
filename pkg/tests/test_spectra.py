import cmath
import math
import random

import numpy as np
import pytest

from a2quotient.eigen import SpectralParam, Stratum, eigenvalue_pair
from a2quotient.spectra import (
    InvalidEpsilon, SetTag, TruncationTooCoarse, classify_point, is_decreasing,
    non_ramanujan_witness, norm_divergence, render_spectra, residual_sweep,
    sigma0, sigma1_distance, sigma1_point, sigma2_boundary_point,
    sigma2_contains,
)
from oracles import trivial_norm_sq_limit

ROT = cmath.exp(2j * cmath.pi / 3)


def unimodular_generic(rng, min_gap=5e-3):
    while True:
        a, b = rng.uniform(0.3, 2.8), rng.uniform(3.5, 6.0)
        s = (cmath.exp(1j * a), cmath.exp(1j * b), cmath.exp(-1j * (a + b)))
        if min(abs(s[0] - s[1]), abs(s[0] - s[2]), abs(s[1] - s[2])) > min_gap:
            return s


class TestSigma0:
    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_points(self, q):
        pts = sigma0(q)
        assert pts[0] == pytest.approx(q * q + q + 1)
        assert all(abs(p) == pytest.approx(q * q + q + 1) for p in pts)

    def test_matches_trivial_eigenvalues(self, q=2):
        for k, pt in enumerate(sigma0(q)):
            w = cmath.exp(2j * cmath.pi * k / 3)
            p = SpectralParam.from_triple(q, q * w, w, w / q)
            assert eigenvalue_pair(q, p).lambda_plus == pytest.approx(pt)


class TestSigma1:
    def test_cusp_value(self):
        assert sigma1_point(2, 0.0) == pytest.approx(2 ** 1.5 + 2 + 2 ** 0.5)
        assert sigma1_point(2, 0.0) == pytest.approx(6.242640687119285)

    def test_rotated_cusps(self):
        p0 = sigma1_point(2, 0.0)
        assert sigma1_point(2, 2 * math.pi / 3) == pytest.approx(p0 * ROT)

    def test_distance_on_curve(self):
        for th in (0.0, 0.7, 2.1, 4.4):
            assert sigma1_distance(2, sigma1_point(2, th)) < 1e-6

    def test_distance_off_curve(self):
        assert sigma1_distance(2, 0j) > 1


class TestSigma2:
    def test_center_and_cusp(self):
        assert sigma2_contains(2, 0j)
        assert sigma2_contains(2, 6.0)       # 3q, triple root 1
        assert sigma2_contains(2, 6.0 * ROT)

    def test_sigma1_cusp_outside(self):
        q = 2
        lam = q ** 1.5 + q + q ** 0.5
        assert not sigma2_contains(q, lam)

    @pytest.mark.parametrize("q", [2, 3])
    def test_boundary_and_scaled(self, q):
        for k in range(64):
            phi = 2 * math.pi * k / 64
            b = sigma2_boundary_point(q, phi)
            assert sigma2_contains(q, b), phi
            assert not sigma2_contains(q, 1.02 * b), phi

    def test_rotation_and_conjugation_invariance(self):
        rng = random.Random(3)
        q = 2
        for _ in range(40):
            lam = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
            base = sigma2_contains(q, lam)
            assert sigma2_contains(q, lam * ROT) == base
            assert sigma2_contains(q, lam.conjugate()) == base
            d = sigma1_distance(q, lam)
            assert sigma1_distance(q, lam * ROT) == pytest.approx(d, abs=1e-8)
            assert sigma1_distance(q, lam.conjugate()) == pytest.approx(d, abs=1e-8)

    def test_interior_images_of_random_triples(self):
        rng = random.Random(5)
        q = 2
        for _ in range(30):
            s = unimodular_generic(rng)
            lam = q * sum(s)
            assert sigma2_contains(q, lam)


class TestClassify:
    def test_tags(self):
        q = 2
        assert classify_point(q, 7.0).set_tag is SetTag.SIGMA0
        assert classify_point(q, sigma1_point(q, 0.9)).set_tag is SetTag.SIGMA1
        assert classify_point(q, 0j).set_tag is SetTag.SIGMA2_INTERIOR
        assert classify_point(q, sigma2_boundary_point(q, 1.0)).set_tag is SetTag.SIGMA2_BOUNDARY
        assert classify_point(q, 100 + 0j).set_tag is SetTag.OUTSIDE
        # between the curve and the region: no claim, hence Outside
        mid = 0.5 * (6.0 + 2 ** 1.5 + 2 + 2 ** 0.5)
        assert classify_point(q, complex(mid, 0)).set_tag is SetTag.OUTSIDE


class TestResidualSweep:
    def test_center_family_decreasing(self):
        q = 2
        w = cmath.exp(2j * cmath.pi / 3)
        param = SpectralParam.from_triple(q, 1.0, w, w * w)  # eigenvalue 0
        reports = residual_sweep(q, param, (0.2, 0.1, 0.05))
        assert [r.depth for r in reports] == [60, 120, 240]
        assert all(r.truncation_fraction < 0.01 for r in reports)
        assert is_decreasing(reports)
        ratios = [r.residual_plus for r in reports]
        assert ratios[-1] < ratios[0]

    def test_sigma1_family_decreasing(self):
        q, th = 2, 0.7
        r = math.sqrt(q)
        param = SpectralParam.from_triple(
            q, r * cmath.exp(1j * th), cmath.exp(-2j * th), cmath.exp(1j * th) / r)
        reports = residual_sweep(q, param, (0.2, 0.1, 0.05))
        assert is_decreasing(reports)
        lam = eigenvalue_pair(q, param).lambda_plus
        assert sigma1_distance(q, lam) < 1e-9

    def test_trivial_exact(self):
        q = 2
        param = SpectralParam.from_triple(q, 2.0, 1.0, 0.5)
        assert param.stratum is Stratum.TRIVIAL
        reports = residual_sweep(q, param, (0.2, 0.1))
        for r in reports:
            assert r.epsilon == 0.0
            assert r.residual_plus < 1e-12 and r.residual_minus < 1e-12

    def test_invalid_epsilon(self):
        param = SpectralParam.from_triple(2, 1.0, 1.0, 1.0)
        with pytest.raises(InvalidEpsilon):
            residual_sweep(2, param, (0.6,))
        with pytest.raises(InvalidEpsilon):
            residual_sweep(2, param, (0.0,))

    def test_truncation_guard(self):
        q = 2
        w = cmath.exp(2j * cmath.pi / 3)
        param = SpectralParam.from_triple(q, 1.0, w, w * w)
        with pytest.raises(TruncationTooCoarse):
            residual_sweep(q, param, (0.2,), depth_coeff=1.0)  # depth 5, far too shallow

    def test_slack_detector(self):
        q = 2
        w = cmath.exp(2j * cmath.pi / 3)
        param = SpectralParam.from_triple(q, 1.0, w, w * w)
        reports = residual_sweep(q, param, (0.05, 0.2))  # wrong order: increasing
        assert not is_decreasing(reports)


class TestNormDivergence:
    def test_trivial_converges(self):
        q = 2
        param = SpectralParam.from_triple(q, 2.0, 1.0, 0.5)
        partials = norm_divergence(q, param, [10, 20, 40])
        assert partials[-1] == pytest.approx(float(trivial_norm_sq_limit(2)), abs=1e-10)
        assert partials[-1] == pytest.approx(8 / 7, abs=1e-10)

    def test_generic_linear_growth(self):
        q = 2
        rng = random.Random(11)
        param = SpectralParam.from_triple(q, *unimodular_generic(rng))
        depths = list(range(20, 201, 20))
        partials = norm_divergence(q, param, depths)
        assert all(b > a for a, b in zip(partials, partials[1:]))
        # roughly linear: positive slope fit of partial vs depth
        slope = np.polyfit(depths, partials, 1)[0]
        assert slope > 0.1
        assert partials[-1] > 10 * 8 / 7

    def test_triple_polynomial_growth(self):
        q = 2
        param = SpectralParam.from_triple(q, 1.0, 1.0, 1.0)
        depths = [25, 50, 100, 200]
        partials = norm_divergence(q, param, depths)
        logs = np.log(partials)
        slope = np.polyfit(np.log(depths), logs, 1)[0]
        assert slope >= 3


class TestWitness:
    def test_q2(self):
        rep = non_ramanujan_witness(2, eps_list=(0.2, 0.1, 0.05))
        assert not rep.in_sigma2
        assert rep.margin == pytest.approx(2 ** 1.5 + 2 ** 0.5 - 4)
        assert rep.margin == pytest.approx(0.24264068711928477)
        assert rep.decreasing

    def test_q3_margin(self):
        rep = non_ramanujan_witness(3, eps_list=(0.25, 0.2))
        assert rep.margin == pytest.approx(3 * math.sqrt(3) + math.sqrt(3) - 6)
        assert rep.margin == pytest.approx(0.9282032302755088)
        assert rep.margin > 0

    def test_margin_positive_all_q(self):
        for q in (2, 3, 5, 7, 11, 13):
            assert q ** 1.5 + q ** 0.5 - 2 * q > 0


class TestRender:
    def test_svg_structure(self, tmp_path):
        out = tmp_path / "spec.svg"
        render_spectra(2, out)
        text = out.read_text()
        assert text.count("<circle") == 3
        paths = [ln for ln in text.splitlines() if ln.startswith("<path")]
        assert len(paths) == 2
        filled = [p for p in paths if 'fill="none"' not in p]
        empty = [p for p in paths if 'fill="none"' in p]
        assert len(filled) == 1 and len(empty) == 1
        assert filled[0].count("Z") == 1 and empty[0].count("Z") == 1

    def test_cusp_marker_angles(self, tmp_path):
        import re
        out = tmp_path / "spec.svg"
        render_spectra(2, out)
        text = out.read_text()
        centers = [(float(m.group(1)), float(m.group(2)))
                   for m in re.finditer(r'<circle cx="([-\d.]+)" cy="([-\d.]+)"', text)]
        angles = sorted((math.atan2(-(y - 320), x - 320)) % (2 * math.pi)
                        for x, y in centers)
        for got, want in zip(angles, [0, 2 * math.pi / 3, 4 * math.pi / 3]):
            assert got == pytest.approx(want, abs=1e-2)

    def test_outer_curve_strictly_encloses(self):
        q = 2
        dists = []
        for k in range(64):
            th = 2 * math.pi * k / 64
            pt = sigma1_point(q, th)
            assert not sigma2_contains(q, pt)
            dists.append(min(abs(pt - sigma2_boundary_point(q, 2 * math.pi * j / 512))
                             for j in range(512)))
        assert min(dists) > 0.01
