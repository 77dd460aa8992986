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

"""Explicit non-integral functions whose (T - a_p)-image is integral.

When the weight conditions fail, the lattice ``(T - a_p)(ind) meets ind^0``
is strictly larger than ``(T - a_p)(ind^0)``; the functions built here are
the witnesses. Four constructions cover the failing profiles:

``sharedResidueClass``
    two positive-weight embeddings share a residue class;
``multiClassOverflow``
    classes are singletons, several are occupied, and some
    ``d + 1 > p**v``;
``singleClassOverflow``
    one embedding of positive weight with ``d >= q + 1``;
``singleClassBoundary``
    one embedding of positive weight with ``d = q``, needing support at
    level two.
"""

__all__ = ["COUNTEREXAMPLE_CASES", "counterexampleCase", "counterexampleDepth", "chooseDelta",
           "buildCounterexample", "checkCounterexample", "powerSumIdentities"]

import lsst.pipe.base as pipeBase
from lsst.utils.logging import getLogger

from .criterion import theoremConditions
from .exceptions import NotApplicableError
from .induction import InducedFunction, heckeT, isIntegralFn
from .latticeVector import LatticeVector
from .probeReport import ProbeReport
from .ringTower import EScalar
from .serialization import inducedFunctionToJson
from .tree import BASE_VERTEX, DigitString, TreeVertex

_LOG = getLogger(__name__)

COUNTEREXAMPLE_CASES = ("sharedResidueClass", "multiClassOverflow", "singleClassOverflow",
                        "singleClassBoundary")


def counterexampleCase(profile):
    """Name of the construction that applies to a failing profile.

    Returns
    -------
    result : `lsst.pipe.base.Struct`
        ``case`` and the embeddings it uses: ``sigma`` and, for the two
        multi-embedding constructions, ``tau``.

    Raises
    ------
    NotApplicableError
        Raised if the weight conditions hold.
    """
    report = theoremConditions(profile)
    if report.verdict:
        raise NotApplicableError("Weight conditions hold for %r; no counterexample exists" % (profile,))
    if not report.conditionI:
        sigma, tau = profile.J[report.witnessI][:2]
        return pipeBase.Struct(case="sharedResidueClass", sigma=sigma, tau=tau, report=report)
    sigma = report.witnessII
    if len(profile.occupiedClasses()) > 1:
        f = profile.tower.f
        target = (profile.gamma[sigma] + profile.v[sigma]) % f
        tau = profile.J[target][0]
        return pipeBase.Struct(case="multiClassOverflow", sigma=sigma, tau=tau, report=report)
    if profile.d[sigma] >= profile.tower.q + 1:
        return pipeBase.Struct(case="singleClassOverflow", sigma=sigma, tau=None, report=report)
    return pipeBase.Struct(case="singleClassBoundary", sigma=sigma, tau=None, report=report)


def counterexampleDepth(case):
    """Largest level in the support of the construction."""
    return 2 if case == "singleClassBoundary" else 0


def chooseDelta(satake, index=0):
    """The element of smaller valuation among sigma(pi) and a_p."""
    return satake.delta(index)


def _axisIndex(profile, sigma, value):
    index = [0]*len(profile.d)
    index[sigma] = value
    return tuple(index)


def _combination(profile, terms, scale):
    """sum of sign * e_index, times ``scale``."""
    vector = LatticeVector(profile)
    for index, sign in terms:
        vector.coeffs[index] = vector.coeffs[index] + EScalar.fromInt(profile.tower, sign)*scale
    return vector


def buildCounterexample(profile, satake):
    """A function h with h non-integral and (T - a_p)(h) integral.

    Parameters
    ----------
    profile : `lsst.padic.hecke.WeightProfile`
        Weights failing the conditions.
    satake : `lsst.padic.hecke.SatakeData`

    Returns
    -------
    h : `lsst.padic.hecke.InducedFunction`

    Raises
    ------
    NotApplicableError
        Raised if the weight conditions hold.
    """
    tower = profile.tower
    choice = counterexampleCase(profile)
    sigma, tau = choice.sigma, choice.tau
    q = tower.q
    if choice.case == "singleClassBoundary":
        deltaInverse = chooseDelta(satake, sigma).inverse()
    else:
        deltaInverse = chooseDelta(satake).inverse()

    h = InducedFunction(profile)
    if choice.case == "sharedResidueClass":
        terms = [(_axisIndex(profile, sigma, 1), 1), (_axisIndex(profile, tau, 1), -1)]
        h.addTerm(BASE_VERTEX, _combination(profile, terms, deltaInverse))
    elif choice.case == "multiClassOverflow":
        power = tower.p**profile.v[sigma]
        terms = [(_axisIndex(profile, sigma, power), (-1)**power), (_axisIndex(profile, tau, 1), 1)]
        h.addTerm(BASE_VERTEX, _combination(profile, terms, deltaInverse))
    elif choice.case == "singleClassOverflow":
        terms = [(_axisIndex(profile, sigma, 1), 1), (_axisIndex(profile, sigma, q), (-1)**q)]
        h.addTerm(BASE_VERTEX, _combination(profile, terms, deltaInverse))
    else:
        odd = tower.p != 2
        base = [(_axisIndex(profile, sigma, 0), 1), (_axisIndex(profile, sigma, q - 1), -1 if odd else 1)]
        h.addTerm(BASE_VERTEX, _combination(profile, base, deltaInverse*EScalar.fromInt(tower, q - 1)))
        outer = [(_axisIndex(profile, sigma, 1), 1 if odd else -1), (_axisIndex(profile, sigma, q), -1)]
        for code in range(q):
            lam = tower.ofTeichmuller(tower.fqDecode(code))
            weight = EScalar(tower, tower.ofPow(tower.embed(sigma, lam), q - 2))
            vertex = TreeVertex(0, 2, DigitString((0, code)))
            h.addTerm(vertex, _combination(profile, outer, deltaInverse*weight))
    _LOG.debug("Built %s counterexample for %r with %d terms", choice.case, profile, len(h))
    return h


def checkCounterexample(h, satake, config=None):
    """Check that h is not integral while (T - a_p)(h) is.

    Parameters
    ----------
    h : `lsst.padic.hecke.InducedFunction`
    satake : `lsst.padic.hecke.SatakeData`
    config : `dict`, optional
        Summary copied into the report.

    Returns
    -------
    report : `lsst.padic.hecke.ProbeReport`
    """
    image = heckeT(h, satake)
    hIntegral = isIntegralFn(h)
    imageIntegral = isIntegralFn(image)
    verdict = not hIntegral and imageIntegral
    certificate = {"h": inducedFunctionToJson(h), "image": inducedFunctionToJson(image),
                   "hIntegral": hIntegral, "imageIntegral": imageIntegral}
    return ProbeReport(config or {}, "counterexample", h.topLevel(), verdict, certificate)


def powerSumIdentities(tower, index=0):
    """Check sum sigma([l])**(2q - 2) = q - 1 and p | sum sigma([l])**(q - 2)
    over the Teichmuller digits l.

    Returns
    -------
    result : `lsst.pipe.base.Struct`
        ``high`` and ``low`` (the two sums), ``highOk``, ``lowOk`` and
        ``verdict``.
    """
    q = tower.q
    high = EScalar.zero(tower)
    low = EScalar.zero(tower)
    for code in range(q):
        image = EScalar(tower, tower.embed(index, tower.ofTeichmuller(tower.fqDecode(code))))
        high = high + image**(2*q - 2)
        low = low + image**(q - 2)
    highOk = high == EScalar.fromInt(tower, q - 1)
    lowOk = low.isDivisibleByPi(tower.e)
    return pipeBase.Struct(high=high, low=low, highOk=highOk, lowOk=lowOk, verdict=highOk and lowOk)
