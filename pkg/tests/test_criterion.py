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

import itertools
import unittest

import numpy as np

import lsst.utils.tests
from lsst.padic.hecke import (RingTower, Valuation, WeightProfile, bsGate, bsGateDetail, isEasyCase,
                              theoremConditions, vandermondeDetail, vandermondeExponents,
                              vandermondeUnit)

from utils import makeProfile, makeTower


class ConditionsTest(lsst.utils.tests.TestCase):
    """The two weight conditions and their witnesses."""

    def testPassing(self):
        report = theoremConditions(makeProfile(3, 2, 1, (1, 1)))
        self.assertTrue(report.verdict)
        self.assertIsNone(report.witnessI)
        self.assertIsNone(report.witnessII)

    def testHeavyWeight(self):
        report = theoremConditions(makeProfile(3, 2, 1, (3, 1)))
        self.assertTrue(report.conditionI)
        self.assertFalse(report.conditionII)
        self.assertEqual(report.witnessII, 0)
        self.assertFalse(report.verdict)

    def testSharedClass(self):
        report = theoremConditions(makeProfile(3, 1, 2, (1, 1)))
        self.assertFalse(report.conditionI)
        self.assertEqual(report.witnessI, 0)
        self.assertTrue(report.conditionII)

    def testWeightZero(self):
        self.assertTrue(theoremConditions(makeProfile(2, 1, 1, (0,))).verdict)

    def testSingleClassBound(self):
        # One occupied class gives v = f, so d + 1 <= q.
        self.assertTrue(theoremConditions(makeProfile(3, 2, 1, (8, 0))).verdict)
        self.assertFalse(theoremConditions(makeProfile(3, 2, 1, (9, 0))).verdict)

    def testReport(self):
        data = theoremConditions(makeProfile(3, 2, 1, (3, 1))).toDict()
        self.assertEqual(data["classes"], {"0": [0], "1": [1]})
        self.assertEqual(data["gaps"], {"0": 1, "1": 1})
        self.assertFalse(data["verdict"])

    def testCyclicRelabeling(self):
        # Shifting every gamma by c permutes the classes and leaves the gaps alone.
        rng = np.random.RandomState(23)
        checked = 0
        for p, f, e in [(3, 2, 1), (2, 2, 1), (3, 2, 2), (2, 3, 1)]:
            tower = makeTower(p, f, e)
            for c in range(1, f):
                table = [((gamma + c) % f, j) for gamma, j in tower.embeddings]
                rotatedTower = RingTower.fromParameters(p, f, e, 12, embeddings=table)
                for _ in range(15):
                    d = tuple(int(x) for x in rng.randint(0, 5, size=tower.degree))
                    original = theoremConditions(WeightProfile(tower, d))
                    rotated = theoremConditions(WeightProfile(rotatedTower, d))
                    self.assertEqual(rotated.verdict, original.verdict, msg=(p, f, e, c, d))
                    self.assertEqual(rotated.conditionI, original.conditionI)
                    self.assertEqual(rotated.conditionII, original.conditionII)
                    self.assertEqual(rotated.gaps, original.gaps)
                    for l in range(f):
                        self.assertEqual(rotated.classes[(l + c) % f], original.classes[l])
                    checked += 1
        self.assertEqual(checked, 75)


class GateTest(lsst.utils.tests.TestCase):
    """The valuation gate on the Satake parameters."""

    def testTable(self):
        weightOne = makeProfile(3, 1, 1, (1,))
        twoEmbeddings = makeProfile(3, 2, 1, (1, 1))
        rows = [
            (weightOne, 1, 1, True),
            (weightOne, 0, 2, True),
            (weightOne, 2, 0, True),
            (weightOne, 1, 0, False),
            (weightOne, -1, 3, False),
            (twoEmbeddings, 2, 2, True),
        ]
        for profile, valAlpha, valBeta, expected in rows:
            self.assertEqual(bsGate(valAlpha, valBeta, profile), expected, msg="%d %d" % (valAlpha, valBeta))

    def testDetail(self):
        detail = bsGateDetail(-1, 3, makeProfile(3, 1, 1, (1,)))
        self.assertEqual(detail.balance, 0)
        self.assertTrue(detail.equality)
        self.assertFalse(detail.inequality)

    def testEqualityIsSymmetric(self):
        profile = makeProfile(3, 2, 1, (2, 1))
        for a, b in itertools.product(range(-2, 8), repeat=2):
            self.assertEqual(bsGateDetail(a, b, profile).equality, bsGateDetail(b, a, profile).equality)

    def testEasyCase(self):
        self.assertTrue(isEasyCase(0, 2))
        self.assertTrue(isEasyCase(2, 0))
        self.assertFalse(isEasyCase(1, 1))


class VandermondeTest(lsst.utils.tests.TestCase):
    """Distinctness of the nodes [zeta]^E(i) and the determinant."""

    def testExponents(self):
        profile = makeProfile(3, 2, 1, (1, 1))
        self.assertEqual(vandermondeExponents(profile), [3, 1, 4])
        self.assertEqual(vandermondeExponents(profile, includeZeroIndex=True), [0, 3, 1, 4])

    def testDistinctNodes(self):
        detail = vandermondeDetail(makeProfile(3, 2, 1, (1, 1)))
        self.assertTrue(detail.unit)
        self.assertIsNone(detail.collision)
        self.assertEqual(detail.detValuation, Valuation.finite(0))
        self.assertTrue(vandermondeUnit(makeProfile(3, 2, 1, (1, 1)), includeZeroIndex=True))

    def testCollision(self):
        detail = vandermondeDetail(makeProfile(3, 1, 1, (3,)))
        self.assertFalse(detail.unit)
        self.assertEqual(detail.collision, (0, 2))
        self.assertFalse(detail.detValuation.isFinite())

    def testWeightZero(self):
        detail = vandermondeDetail(makeProfile(3, 1, 1, (0,)))
        self.assertTrue(detail.unit)
        self.assertEqual(detail.nodes, 0)
        self.assertIsNone(detail.detValuation)

    def testSkipDeterminant(self):
        detail = vandermondeDetail(makeProfile(3, 2, 1, (2, 2)), maxSize=4)
        self.assertTrue(detail.unit)
        self.assertIsNone(detail.detValuation)
        self.assertIn("skipped", detail.note)
        self.assertIn("maxSize=4", detail.note)
        self.assertIsNone(vandermondeDetail(makeProfile(3, 2, 1, (2, 2))).note)

    def testAgreesWithConditions(self):
        for p, f, e in [(2, 1, 1), (3, 1, 1), (2, 2, 1), (3, 2, 1), (3, 1, 2), (5, 1, 1), (5, 1, 2)]:
            tower = makeTower(p, f, e)
            for d in itertools.product(range(4), repeat=tower.degree):
                profile = makeProfile(p, f, e, d)
                self.assertEqual(vandermondeUnit(profile, maxSize=8), theoremConditions(profile).verdict,
                                 msg="p=%d f=%d e=%d d=%s" % (p, f, e, d))


class MemoryTester(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
