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

import lsst.utils.tests
from lsst.padic.hecke import (BASE_VERTEX, InducedFunction, LatticeVector, NotApplicableError,
                              SatakeData, EScalar, buildCounterexample, checkCounterexample,
                              counterexampleCase, counterexampleDepth, heckeT, powerSumIdentities)

from utils import makeProfile, makeTower

# (p, f, e, weights, construction) for each failure mode.
FAILING_PROFILES = [
    (3, 1, 2, (1, 1), "sharedResidueClass"),
    (3, 2, 2, (1, 1, 0, 0), "sharedResidueClass"),
    (3, 2, 1, (3, 1), "multiClassOverflow"),
    (2, 2, 1, (2, 1), "multiClassOverflow"),
    (3, 1, 1, (4,), "singleClassOverflow"),
    (2, 1, 1, (3,), "singleClassOverflow"),
    (3, 1, 1, (3,), "singleClassBoundary"),
    (2, 1, 1, (2,), "singleClassBoundary"),
    (5, 1, 1, (5,), "singleClassBoundary"),
]


class CounterexampleCaseTest(lsst.utils.tests.TestCase):
    """Selection of the construction from the weights."""

    def testCases(self):
        for p, f, e, d, case in FAILING_PROFILES:
            choice = counterexampleCase(makeProfile(p, f, e, d))
            self.assertEqual(choice.case, case, msg="p=%d f=%d e=%d d=%s" % (p, f, e, d))

    def testEmbeddings(self):
        choice = counterexampleCase(makeProfile(3, 2, 1, (3, 1)))
        self.assertEqual((choice.sigma, choice.tau), (0, 1))
        choice = counterexampleCase(makeProfile(3, 1, 2, (1, 1)))
        self.assertEqual((choice.sigma, choice.tau), (0, 1))

    def testPassingProfile(self):
        with self.assertRaises(NotApplicableError):
            counterexampleCase(makeProfile(3, 2, 1, (1, 1)))

    def testDepth(self):
        self.assertEqual(counterexampleDepth("singleClassBoundary"), 2)
        self.assertEqual(counterexampleDepth("sharedResidueClass"), 0)


class CounterexampleTest(lsst.utils.tests.TestCase):
    """The constructed h is not integral while (T - a_p)(h) is."""

    def testConstructions(self):
        for p, f, e, d, case in FAILING_PROFILES:
            profile = makeProfile(p, f, e, d)
            for exponent in (1, 2):
                satake = SatakeData.fromAp(profile.tower, exponent)
                h = buildCounterexample(profile, satake)
                report = checkCounterexample(h, satake, {"case": case})
                msg = "%s p=%d f=%d e=%d d=%s a_p=pi^%d" % (case, p, f, e, d, exponent)
                self.assertTrue(report.verdict, msg=msg)
                self.assertFalse(report.certificate["hIntegral"], msg=msg)
                self.assertEqual(report.depth, counterexampleDepth(case), msg=msg)
                self.assertEqual(report.mode, "counterexample")

    def testSatakeParameters(self):
        profile = makeProfile(3, 1, 1, (4,))
        satake = SatakeData.fromValuations(profile.tower, 1, 2)
        self.assertTrue(checkCounterexample(buildCounterexample(profile, satake), satake).verdict)

    def testRejectsIntegralFunction(self):
        profile = makeProfile(3, 1, 1, (1,))
        satake = SatakeData.fromAp(profile.tower, 1)
        h = InducedFunction.single(profile, BASE_VERTEX, LatticeVector.basis(profile, (0,)))
        self.assertFalse(checkCounterexample(h, satake).verdict)

    def testRejectsWeightZero(self):
        # pi^-1 [1, 1] has (T - a_p) image pi^-1 times q + 2 unit terms.
        profile = makeProfile(3, 1, 1, (0,))
        tower = profile.tower
        satake = SatakeData.fromAp(tower, 1)
        h = InducedFunction.single(profile, BASE_VERTEX,
                                   LatticeVector.basis(profile, (0,), EScalar.pi(tower, -1)))
        report = checkCounterexample(h, satake)
        self.assertFalse(report.verdict)
        self.assertFalse(report.certificate["imageIntegral"])
        self.assertEqual(len(heckeT(h, satake)), tower.q + 2)


class PowerSumTest(lsst.utils.tests.TestCase):
    """Sums of powers of Teichmuller digits used by the boundary case."""

    def testIdentities(self):
        for p, f in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)]:
            result = powerSumIdentities(makeTower(p, f))
            self.assertTrue(result.highOk, msg="q=%d" % p**f)
            self.assertTrue(result.lowOk, msg="q=%d" % p**f)
            self.assertTrue(result.verdict)

    def testOtherEmbedding(self):
        self.assertTrue(powerSumIdentities(makeTower(3, 2), index=1).verdict)


class MemoryTester(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
