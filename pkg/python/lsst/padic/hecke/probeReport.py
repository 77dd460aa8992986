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

__all__ = ["ProbeReport"]


class ProbeReport:
    """Outcome of one probe with the data needed to re-check it.

    Parameters
    ----------
    config : `dict`
        Summary of the ring, weights and a_p.
    mode : `str`
        One of ``counterexample``, ``thetaKernel``, ``tInjectivity``,
        ``separation``.
    depth : `int`
        Largest level of the functions involved.
    verdict : `bool`
    certificate : `dict`, optional
        JSON-ready vectors, functions or rank data backing the verdict.
    precisionMargin : `int`, optional
        Largest congruence level certified, for probes that report one.
    notes : `list` of `str`, optional
    """

    def __init__(self, config, mode, depth, verdict, certificate=None, precisionMargin=None, notes=None):
        self.config = config
        self.mode = mode
        self.depth = depth
        self.verdict = bool(verdict)
        self.certificate = certificate if certificate is not None else {}
        self.precisionMargin = precisionMargin
        self.notes = list(notes or [])
        self.wallTime = None

    def toDict(self):
        result = {
            "config": self.config,
            "mode": self.mode,
            "depth": self.depth,
            "verdict": self.verdict,
            "certificate": self.certificate,
            "precisionMargin": self.precisionMargin,
            "notes": self.notes,
        }
        if self.wallTime is not None:
            result["wallTime"] = self.wallTime
        return result

    def __repr__(self):
        return "ProbeReport(mode=%s, depth=%s, verdict=%s)" % (self.mode, self.depth, self.verdict)
