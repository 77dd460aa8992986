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

__all__ = ["PrecisionLossError", "NotInjectiveError", "NotInvertibleError",
           "ComponentOutOfRangeError", "NotApplicableError", "ConfigInvalidError",
           "ParseError", "SizeCapExceededError"]


class PrecisionLossError(ArithmeticError):
    """Raised when a zero, unit, integrality or pivot decision cannot be
    certified below the absolute precision of the data.
    """
    pass


class NotInjectiveError(ArithmeticError):
    """Raised when a linear map has a kernel at working precision."""
    pass


class NotInvertibleError(ArithmeticError):
    """Raised when an element or matrix that must be invertible is not."""
    pass


class ComponentOutOfRangeError(ValueError):
    """Raised when a multi-index exceeds its componentwise bound."""
    pass


class NotApplicableError(ValueError):
    """Raised when an operation's hypothesis does not hold for the given
    weight profile.
    """
    pass


class ConfigInvalidError(ValueError):
    """Raised by ``validate`` when a configuration is inconsistent."""
    pass


class ParseError(ValueError):
    """Raised when a textual or JSON form cannot be decoded."""
    pass


class SizeCapExceededError(RuntimeError):
    """Raised when a requested computation exceeds a configured size cap."""
    pass
