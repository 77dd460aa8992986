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

"""Combinatorial criteria on weight profiles: the residue-class and gap
conditions, the numeric Satake gate, and the Vandermonde unit test.
"""

__all__ = ["CriterionReport", "theoremConditions", "bsGate", "bsGateDetail", "isEasyCase",
           "vandermondeExponents", "vandermondeMatrix", "vandermondeUnit", "vandermondeDetail"]

from dataclasses import dataclass, field
from typing import Optional

import lsst.pipe.base as pipeBase
from lsst.utils.logging import getLogger

from .dvrLinalg import EMatrix, detValuation
from .ringTower import EScalar

_LOG = getLogger(__name__)


@dataclass
class CriterionReport:
    """Outcome of the two weight conditions with their witnesses.

    ``witnessI`` is the smallest residue class holding two or more
    positive-weight embeddings; ``witnessII`` the smallest embedding with
    ``d + 1 > p**v``. Each is None exactly when its condition holds.
    """
    conditionI: bool
    conditionII: bool
    witnessI: Optional[int] = None
    witnessII: Optional[int] = None
    classes: dict = field(default_factory=dict)
    gaps: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return self.conditionI and self.conditionII

    def toDict(self):
        return {
            "conditionI": self.conditionI,
            "witnessI": self.witnessI,
            "conditionII": self.conditionII,
            "witnessII": self.witnessII,
            "verdict": self.verdict,
            "classes": {str(l): list(members) for l, members in sorted(self.classes.items())},
            "gaps": {str(s): v for s, v in sorted(self.gaps.items())},
        }


def theoremConditions(profile):
    """Evaluate ``|J_l| <= 1`` for every class l and ``d + 1 <= p**v`` for
    every positive-weight embedding.

    Parameters
    ----------
    profile : `lsst.padic.hecke.WeightProfile`

    Returns
    -------
    report : `CriterionReport`
    """
    p = profile.tower.p
    crowded = [l for l, members in sorted(profile.J.items()) if len(members) > 1]
    tooHeavy = [s for s in profile.splus if profile.d[s] + 1 > p**profile.v[s]]
    report = CriterionReport(conditionI=not crowded, conditionII=not tooHeavy,
                             witnessI=crowded[0] if crowded else None,
                             witnessII=tooHeavy[0] if tooHeavy else None,
                             classes=dict(profile.J), gaps=dict(profile.v))
    _LOG.debug("Conditions for %r: (i)=%s (ii)=%s", profile, report.conditionI, report.conditionII)
    return report


def bsGateDetail(valAlpha, valBeta, profile):
    """Both relations of the gate, in the normalization val_F(p) = e*f.

    Returns
    -------
    result : `lsst.pipe.base.Struct`
        ``balance`` (the sum that must vanish), ``equality``,
        ``inequality`` and ``verdict``.
    """
    ef = profile.tower.degree
    weight = sum(profile.d)
    balance = -valAlpha + (ef - valBeta) + weight
    equality = balance == 0
    inequality = (ef - valBeta) + weight >= 0
    return pipeBase.Struct(balance=balance, equality=equality, inequality=inequality,
                           verdict=equality and inequality)


def bsGate(valAlpha, valBeta, profile):
    """True iff -val(alpha) + (ef - val(beta)) + sum(d) = 0 and
    (ef - val(beta)) + sum(d) >= 0.
    """
    return bsGateDetail(valAlpha, valBeta, profile).verdict


def isEasyCase(valAlpha, valBeta):
    """True if one of the Satake parameters is a unit."""
    return valAlpha == 0 or valBeta == 0


def vandermondeExponents(profile, includeZeroIndex=False):
    """Exponents ``sum_s i_s p**gamma_s mod (q - 1)`` of the nodes
    ``[zeta]**i``, in multi-index order.
    """
    tower = profile.tower
    weights = [tower.p**gamma for gamma in profile.gamma]
    exponents = []
    for index in profile.multiIndices():
        if not includeZeroIndex and not any(index):
            continue
        exponents.append(sum(i*w for i, w in zip(index, weights)) % (tower.q - 1))
    return exponents


def vandermondeMatrix(profile, includeZeroIndex=False):
    """Square matrix with entry ``[zeta]**(k E(c))`` in row k and column c."""
    tower = profile.tower
    exponents = vandermondeExponents(profile, includeZeroIndex)
    size = len(exponents)
    rows = []
    for k in range(size):
        row = []
        for exponent in exponents:
            node = tower.fqPow(tower.generator, (k*exponent) % (tower.q - 1))
            row.append(EScalar(tower, tower.ofTeichmuller(node)))
        rows.append(row)
    return EMatrix.fromRows(tower, rows)


def vandermondeDetail(profile, includeZeroIndex=False, maxSize=32):
    """Node distinctness with the determinant cross-check.

    Parameters
    ----------
    profile : `lsst.padic.hecke.WeightProfile`
    includeZeroIndex : `bool`, optional
        Include the node of the zero multi-index.
    maxSize : `int`, optional
        Largest node count for which the determinant is computed.

    Returns
    -------
    result : `lsst.pipe.base.Struct`
        ``unit``, ``nodes`` (node count), ``collision`` (first colliding
        pair of exponents or None), ``detValuation`` (None when skipped) and
        ``note`` (why the determinant was skipped, or None).

    Raises
    ------
    RuntimeError
        Raised if the determinant disagrees with node distinctness.
    """
    exponents = vandermondeExponents(profile, includeZeroIndex)
    seen = {}
    collision = None
    for position, exponent in enumerate(exponents):
        if exponent in seen:
            collision = (seen[exponent], position)
            break
        seen[exponent] = position
    unit = collision is None
    valuation = None
    note = None
    if len(exponents) > maxSize:
        note = ("determinant cross-check skipped: %d nodes exceed maxSize=%d; unit rests on node "
                "distinctness alone" % (len(exponents), maxSize))
        _LOG.info("Vandermonde for %r: %s", profile, note)
    elif exponents:
        valuation = detValuation(vandermondeMatrix(profile, includeZeroIndex))
        if unit != (valuation.isFinite() and valuation.value == 0):
            raise RuntimeError("Vandermonde determinant %s disagrees with node distinctness for %r"
                               % (valuation, profile))
    return pipeBase.Struct(unit=unit, nodes=len(exponents), collision=collision, detValuation=valuation,
                           note=note)


def vandermondeUnit(profile, includeZeroIndex=False, maxSize=32):
    """True iff the Vandermonde nodes are pairwise distinct modulo the
    maximal ideal.
    """
    return vandermondeDetail(profile, includeZeroIndex, maxSize).unit
