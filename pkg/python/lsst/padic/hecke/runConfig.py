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

__all__ = ["RunConfig"]

import lsst.pex.config as pexConfig

from .exceptions import ConfigInvalidError
from .induction import SatakeData
from .probes import (CounterexampleProbeConfig, SeparationProbeConfig, ThetaKernelProbeConfig,
                     TInjectivityProbeConfig)
from .ringTower import RingTower, RingTowerConfig
from .sweep import SweepConfig
from .weights import WeightProfile


class RunConfig(pexConfig.Config):
    """Everything one command-line run needs: ring, weights, a_p and the
    probe settings.
    """
    ring = pexConfig.ConfigField(
        dtype=RingTowerConfig,
        doc="Local field, coefficient ring and working precision",
    )
    weights = pexConfig.ListField(
        dtype=int,
        doc="Weight d_sigma for each of the e*f embeddings, in embedding-table order",
        default=[0],
    )
    apExponent = pexConfig.Field(
        dtype=int,
        doc="a_p = apUnit * pi**apExponent when no Satake valuations are given",
        default=1,
    )
    apUnit = pexConfig.Field(
        dtype=int,
        doc="Rational integer unit multiplying the power of pi in a_p",
        default=1,
    )
    satakeValAlpha = pexConfig.Field(
        dtype=int,
        doc="val_F of the Satake parameter alpha (multiple of f); a_p = alpha**f + beta**f",
        default=None,
        optional=True,
    )
    satakeValBeta = pexConfig.Field(
        dtype=int,
        doc="val_F of the Satake parameter beta (multiple of f)",
        default=None,
        optional=True,
    )
    thetaKernel = pexConfig.ConfigField(
        dtype=ThetaKernelProbeConfig,
        doc="Theta-kernel containment probe",
    )
    tInjectivity = pexConfig.ConfigField(
        dtype=TInjectivityProbeConfig,
        doc="Injectivity probe of T",
    )
    separation = pexConfig.ConfigField(
        dtype=SeparationProbeConfig,
        doc="Congruence descent probe",
    )
    counterexample = pexConfig.ConfigField(
        dtype=CounterexampleProbeConfig,
        doc="Explicit counterexample probe",
    )
    sweep = pexConfig.ConfigField(
        dtype=SweepConfig,
        doc="Range of the acceptance sweep",
    )
    timing = pexConfig.Field(
        dtype=bool,
        doc="Add wall-clock time to reports; reports are then no longer byte-stable",
        default=False,
    )
    outPath = pexConfig.Field(
        dtype=str,
        doc="Report or output file; standard output if unset",
        default=None,
        optional=True,
    )

    def setDepth(self, depth):
        """Apply one depth to every probe."""
        for probe in (self.thetaKernel, self.tInjectivity, self.separation, self.counterexample):
            probe.depth = depth

    def validate(self):
        super().validate()
        ring = self.ring
        if len(self.weights) != ring.e*ring.f:
            raise ConfigInvalidError("Expected %d weights for e=%d, f=%d, got %s"
                                     % (ring.e*ring.f, ring.e, ring.f, list(self.weights)))
        if any(d < 0 for d in self.weights):
            raise ConfigInvalidError("Weights must be nonnegative, got %s" % list(self.weights))
        if (self.satakeValAlpha is None) != (self.satakeValBeta is None):
            raise ConfigInvalidError("Give both Satake valuations or neither")
        if self.satakeValAlpha is None:
            if self.apExponent < 1:
                raise ConfigInvalidError("a_p must have positive valuation, got exponent %d"
                                         % self.apExponent)
            if self.apUnit % ring.p == 0:
                raise ConfigInvalidError("apUnit=%d is not a unit modulo p=%d" % (self.apUnit, ring.p))
        else:
            valuations = (("satakeValAlpha", self.satakeValAlpha), ("satakeValBeta", self.satakeValBeta))
            for name, value in valuations:
                if value < 0 or value % ring.f:
                    raise ConfigInvalidError("%s=%d must be a nonnegative multiple of f=%d"
                                             % (name, value, ring.f))
            alpha, beta = self.satakeValAlpha, self.satakeValBeta
            if min(alpha, beta) == 0 and alpha != beta:
                raise ConfigInvalidError("a_p = alpha^f + beta^f is a unit when exactly one parameter "
                                         "is a unit")

    def makeTower(self):
        return RingTower(self.ring)

    def makeProfile(self, tower):
        return WeightProfile(tower, self.weights)

    def makeSatake(self, tower):
        """The `SatakeData` described by this config.

        Raises
        ------
        ConfigInvalidError
            Raised if the resulting a_p is not in the maximal ideal.
        """
        if self.satakeValAlpha is None:
            return SatakeData.fromAp(tower, self.apExponent, self.apUnit)
        return SatakeData.fromValuations(tower, self.satakeValAlpha, self.satakeValBeta)
