# This file is part of padic_hecke.
#
# Developed for the LSST Data Management System.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

import unittest

import numpy as np

import lsst.utils.tests
from lsst.padic.hecke import (ALPHA_VERTEX, BASE_VERTEX, ConfigInvalidError, DigitString, EScalar,
                              GMatrix, InducedFunction, LatticeVector, SatakeData, TreeVertex,
                              Valuation, actG, actKZ, enumerateBall, enumerateSphere, fromPair,
                              heckeGeneric, heckeT, isIntegralFn, KZElement, tMinus, tPlus,
                              vertexMatrix)

from utils import (ACCEPTANCE_TOWERS, makeProfile, makeTower, randomFunction, randomIntegralVector,
                   randomKZ)


def smallWeights(tower):
    """A few weight vectors with total weight at most 2."""
    degree = tower.degree
    weights = [(0,)*degree, (1,) + (0,)*(degree - 1), (2,) + (0,)*(degree - 1)]
    if degree > 1:
        weights.append((1,)*2 + (0,)*(degree - 2))
    return weights


class InducedFunctionTest(lsst.utils.tests.TestCase):
    """Bookkeeping of finitely supported functions."""

    def setUp(self):
        self.profile = makeProfile(3, 1, 1, (1,))

    def testAccumulation(self):
        profile = self.profile
        e0 = LatticeVector.basis(profile, (0,))
        f = InducedFunction(profile)
        f.addTerm(BASE_VERTEX, e0)
        f.addTerm(BASE_VERTEX, e0)
        self.assertEqual(f.vector(BASE_VERTEX), e0.scaled(2))
        f.addTerm(ALPHA_VERTEX, LatticeVector(profile))
        self.assertEqual(len(f), 1)
        self.assertEqual(f.topLevel(), 0)
        self.assertIsNone(InducedFunction(profile).topLevel())

    def testEquality(self):
        rng = np.random.RandomState(7)
        f = randomFunction(self.profile, rng, depth=2, terms=4)
        self.assertEqual(f, f.copy())
        self.assertTrue((f - f).isZero())
        self.assertEqual(f + f, f.scaled(2))

    def testRestriction(self):
        profile = self.profile
        e0 = LatticeVector.basis(profile, (0,))
        f = InducedFunction(profile, {BASE_VERTEX: e0, ALPHA_VERTEX: e0})
        self.assertEqual(f.restrictedTo([ALPHA_VERTEX]).support(), [ALPHA_VERTEX])

    def testIntegrality(self):
        profile = self.profile
        tower = profile.tower
        v = LatticeVector.basis(profile, (1,), EScalar.pi(tower, -1))
        self.assertFalse(isIntegralFn(InducedFunction.single(profile, BASE_VERTEX, v)))
        self.assertTrue(isIntegralFn(InducedFunction.single(profile, BASE_VERTEX, v.scaled(3))))


class GroupActionTest(lsst.utils.tests.TestCase):
    """Left translation of functions by GL_2(F)."""

    def testFromPair(self):
        rng = np.random.RandomState(8)
        profile = makeProfile(3, 1, 1, (2,))
        tower = profile.tower
        v = randomIntegralVector(profile, rng)
        base = fromPair(GMatrix.identity(tower), v)
        self.assertEqual(base.support(), [BASE_VERTEX])
        vertex = TreeVertex(0, 1, DigitString((2,)))
        k = randomKZ(tower, rng)
        self.assertEqual(fromPair(vertexMatrix(vertex, tower) @ GMatrix.fromKZ(k), v),
                         fromPair(vertexMatrix(vertex, tower), actKZ(k, v)))

    def testCentralActsTrivially(self):
        profile = makeProfile(3, 2, 1, (1, 1))
        f = randomFunction(profile, np.random.RandomState(9), depth=1)
        self.assertEqual(actG(GMatrix.central(profile.tower), f), f)

    def testBetaSquared(self):
        profile = makeProfile(3, 1, 2, (1, 1))
        beta = GMatrix.beta(profile.tower)
        f = randomFunction(profile, np.random.RandomState(10), depth=1)
        self.assertEqual(actG(beta, actG(beta, f)), f)


class HeckeOperatorTest(lsst.utils.tests.TestCase):
    """T = T+ + T- in closed form against the convolution sum."""

    def testWeightZero(self):
        profile = makeProfile(3, 1, 1, (0,))
        tower = profile.tower
        one = LatticeVector.basis(profile, (0,))
        image = heckeT(InducedFunction.single(profile, BASE_VERTEX, one))
        self.assertEqual(len(image), tower.q + 1)
        self.assertEqual(image.support(), enumerateBall(0, tower)[1:] + enumerateSphere(0, 1, tower))
        for _, vector in image.items():
            self.assertEqual(vector, one)
        back = tMinus(InducedFunction.single(profile, ALPHA_VERTEX, one))
        self.assertEqual(back, InducedFunction.single(profile, BASE_VERTEX, one))

    def testOutwardStep(self):
        # T+[1, e_1] = sum over lambda of [g_(1, lambda), -[lambda] e_0 + pi e_1].
        profile = makeProfile(3, 1, 1, (1,))
        tower = profile.tower
        image = tPlus(InducedFunction.single(profile, BASE_VERTEX, LatticeVector.basis(profile, (1,))))
        expected = InducedFunction(profile)
        for vertex in enumerateSphere(0, 1, tower):
            lam = EScalar(tower, tower.ofTeichmuller(tower.fqDecode(vertex.mu.codes[0])))
            expected.addTerm(vertex, LatticeVector.fromDict(profile, {(0,): -lam, (1,): EScalar.pi(tower)}))
        self.assertEqual(image, expected)

    def testClosedFormMatchesConvolution(self):
        rng = np.random.RandomState(11)
        for p, f, e in ACCEPTANCE_TOWERS:
            tower = makeTower(p, f, e)
            for d in smallWeights(tower):
                profile = makeProfile(p, f, e, d)
                for vertex in enumerateBall(1, tower):
                    source = InducedFunction.single(profile, vertex, randomIntegralVector(profile, rng))
                    self.assertEqual(heckeT(source), heckeGeneric(source),
                                     msg="p=%d f=%d e=%d d=%s at %s" % (p, f, e, d, vertex.label()))

    def testClosedFormMatchesConvolutionHeavy(self):
        # Weights up to 4 per embedding, single terms and sums on B_2.
        rng = np.random.RandomState(16)
        checked = 0
        for p, f, e in ACCEPTANCE_TOWERS:
            tower = makeTower(p, f, e)
            vertices = enumerateBall(2, tower)
            for _ in range(3):
                d = tuple(int(x) for x in rng.randint(0, 5, size=tower.degree))
                profile = makeProfile(p, f, e, d)
                for _ in range(4):
                    vertex = vertices[rng.randint(0, len(vertices))]
                    source = InducedFunction.single(profile, vertex, randomIntegralVector(profile, rng))
                    self.assertEqual(heckeT(source), heckeGeneric(source),
                                     msg="p=%d f=%d e=%d d=%s at %s" % (p, f, e, d, vertex.label()))
                    checked += 1
                for _ in range(3):
                    source = randomFunction(profile, rng, depth=2, terms=3)
                    self.assertEqual(heckeT(source), heckeGeneric(source), msg="p=%d f=%d e=%d d=%s sum"
                                     % (p, f, e, d))
                    checked += 1
        self.assertEqual(checked, 105)

    def testClosedFormAtDepthTwo(self):
        rng = np.random.RandomState(12)
        profile = makeProfile(3, 1, 1, (2,))
        for vertex in enumerateSphere(1, 2, profile.tower)[:3] + enumerateSphere(0, 2, profile.tower)[-3:]:
            source = InducedFunction.single(profile, vertex, randomIntegralVector(profile, rng))
            self.assertEqual(heckeT(source), heckeGeneric(source))

    def testDisjointSupports(self):
        for p, f, e, d in [(3, 2, 1, (1, 1)), (3, 1, 2, (1, 0)), (2, 1, 1, (2,))]:
            profile = makeProfile(p, f, e, d)
            tower = profile.tower
            e0 = LatticeVector.basis(profile, (1,) + (0,)*(tower.degree - 1))
            seen = set()
            for vertex in enumerateBall(2, tower):
                support = set(tPlus(InducedFunction.single(profile, vertex, e0)).support())
                self.assertEqual(len(support), tower.q)
                self.assertFalse(support & seen, msg="overlap at %s" % vertex.label())
                seen |= support

    def testBetaConjugation(self):
        # T+- on side one is the beta-conjugate of T+- on side zero after w.
        rng = np.random.RandomState(13)
        checked = 0
        for p, f, e, d in [(3, 1, 2, (1, 1)), (2, 1, 1, (2,)), (3, 2, 1, (1, 0))]:
            profile = makeProfile(p, f, e, d)
            tower = profile.tower
            w = KZElement.w(tower)
            beta = GMatrix.beta(tower)
            vertices = [vertex for vertex in enumerateBall(2, tower) if vertex.side == 0]
            for _ in range(34):
                vertex = vertices[rng.randint(0, len(vertices))]
                v = randomIntegralVector(profile, rng)
                sideOne = InducedFunction.single(profile, TreeVertex(1, vertex.n, vertex.mu), v)
                sideZero = InducedFunction.single(profile, vertex, actKZ(w, v))
                for step in (tPlus, tMinus):
                    self.assertEqual(step(sideOne), actG(beta, step(sideZero)),
                                     msg="%s at %s" % (step.__name__, vertex.label()))
                checked += 1
        self.assertGreaterEqual(checked, 100)

    def testEquivariance(self):
        rng = np.random.RandomState(14)
        for p, f, e, d in [(3, 1, 1, (2,)), (3, 2, 1, (1, 1)), (3, 1, 2, (1, 0))]:
            profile = makeProfile(p, f, e, d)
            tower = profile.tower
            source = randomFunction(profile, rng, depth=1, terms=2)
            shifted = vertexMatrix(TreeVertex(0, 1, DigitString((1,))), tower)
            for g in (GMatrix.beta(tower), shifted @ GMatrix.fromKZ(randomKZ(tower, rng))):
                self.assertEqual(heckeT(actG(g, source)), actG(g, heckeT(source)))

    def testIntegralInputsStayIntegral(self):
        rng = np.random.RandomState(17)
        for p, f, e in ACCEPTANCE_TOWERS:
            tower = makeTower(p, f, e)
            satake = SatakeData.fromAp(tower, 1)
            for _ in range(20):
                d = tuple(int(x) for x in rng.randint(0, 3, size=tower.degree))
                source = randomFunction(makeProfile(p, f, e, d), rng, depth=2, terms=3)
                self.assertTrue(isIntegralFn(heckeT(source)))
                self.assertTrue(isIntegralFn(heckeT(source, satake)))

    def testInjectivityAndShift(self):
        rng = np.random.RandomState(15)
        profile = makeProfile(3, 2, 1, (1, 1))
        satake = SatakeData.fromAp(profile.tower, 1)
        source = randomFunction(profile, rng, depth=2, terms=3)
        image = heckeT(source, satake)
        self.assertEqual(image, heckeT(source) - source.scaled(satake.ap))
        self.assertFalse(heckeT(source).isZero())


class SatakeDataTest(lsst.utils.tests.TestCase):

    def testFromAp(self):
        tower = makeTower(3, 2)
        satake = SatakeData.fromAp(tower, 2)
        self.assertEqual(satake.ap.valuation(), Valuation.finite(4))
        with self.assertRaises(ConfigInvalidError):
            SatakeData.fromAp(tower, 0)
        with self.assertRaises(ConfigInvalidError):
            SatakeData.fromAp(tower, 1, unit=3)

    def testFromValuations(self):
        tower = makeTower(3, 2)
        satake = SatakeData.fromValuations(tower, 2, 4)
        self.assertEqual(satake.alpha.valuation(), Valuation.finite(2))
        self.assertEqual(satake.ap.valuation(), Valuation.finite(4))
        with self.assertRaises(ConfigInvalidError):
            SatakeData.fromValuations(tower, 1, 2)
        with self.assertRaises(ConfigInvalidError):
            SatakeData.fromValuations(tower, 0, 2)

    def testDelta(self):
        tower = makeTower(3, 1, 2)
        small = SatakeData.fromAp(tower, 1)
        self.assertIs(small.delta(), small.ap)
        large = SatakeData.fromAp(tower, 3)
        self.assertEqual(large.delta().valuation(), Valuation.finite(1))
        self.assertEqual(large.delta(1), -EScalar.pi(tower))


class MemoryTester(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
