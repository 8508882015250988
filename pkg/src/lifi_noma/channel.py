"""Line-of-sight optical channel model for a single LiFi attocell.

The access point points straight down and every device points straight up,
so the emission and incidence angles coincide and the LOS gain depends only
on the vertical and horizontal distances of a device, never on its polar
angle. Under the shared front-end assumption the visible-light downlink and
the infrared uplink have identical gains for the same geometry. Non-LOS
reflections are neglected.

All powers derived from this model stay in relative electrical units
(noise power in A^2, gains dimensionless); nothing is converted to watts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "OpticalFrontEnd",
    "UserPosition",
    "NoiseModel",
    "lambertian_order",
    "lens_gain",
    "channel_gain",
]


def lambertian_order(semi_angle_deg: float) -> float:
    """Beam-shape exponent of a generalized Lambertian LED.

    Args:
        semi_angle_deg: half-power semi-angle of the emitter, in degrees,
            strictly inside (0, 90).

    Returns:
        The exponent ``-ln 2 / ln(cos(semi_angle))``, always positive.

    Raises:
        ValueError: if the semi-angle is outside (0, 90) degrees.
    """
    if not 0.0 < semi_angle_deg < 90.0:
        raise ValueError(
            f"LED semi-angle must lie strictly inside (0, 90) degrees, got {semi_angle_deg}"
        )
    return -math.log(2.0) / math.log(math.cos(math.radians(semi_angle_deg)))


def lens_gain(refractive_index: float, fov_half_angle_deg: float) -> float:
    """Optical concentrator gain ``n^2 / sin^2(FOV)`` of the receiver lens.

    Args:
        refractive_index: lens refractive index, at least 1.
        fov_half_angle_deg: receiver field-of-view half-angle, degrees, in
            (0, 90]. (90 degrees means no concentration: gain ``n^2``.)

    Raises:
        ValueError: for a non-physical index or a FOV outside (0, 90].
    """
    if refractive_index < 1.0:
        raise ValueError(f"lens refractive index must be >= 1, got {refractive_index}")
    if not 0.0 < fov_half_angle_deg <= 90.0:
        raise ValueError(
            f"FOV half-angle must lie in (0, 90] degrees, got {fov_half_angle_deg}"
        )
    s = math.sin(math.radians(fov_half_angle_deg))
    return refractive_index * refractive_index / (s * s)


@dataclass(frozen=True)
class OpticalFrontEnd:
    """LED/photodiode parameters shared by one link of the attocell.

    Defaults are the reference desk setup: a 70-degree LED and a 1 cm^2
    photodiode with a 70-degree FOV behind a 0.9-gain filter and an n = 1.5
    concentrator lens.

    Attributes:
        semi_angle_deg: LED half-power semi-angle, degrees, in (0, 90).
        responsivity: photodiode responsivity, A/W, positive.
        area: photodiode active area, m^2, positive.
        fov_half_angle_deg: receiver FOV half-angle, degrees, in (0, 90).
        filter_gain: optical filter gain, in (0, 1].
        refractive_index: concentrator lens refractive index, >= 1.
    """

    semi_angle_deg: float = 70.0
    responsivity: float = 0.4
    area: float = 1e-4
    fov_half_angle_deg: float = 70.0
    filter_gain: float = 0.9
    refractive_index: float = 1.5

    def __post_init__(self) -> None:
        problems = []
        if not 0.0 < self.semi_angle_deg < 90.0:
            problems.append(f"semi_angle_deg must be in (0, 90), got {self.semi_angle_deg}")
        if self.responsivity <= 0.0:
            problems.append(f"responsivity must be positive, got {self.responsivity}")
        if self.area <= 0.0:
            problems.append(f"area must be positive, got {self.area}")
        if not 0.0 < self.fov_half_angle_deg < 90.0:
            problems.append(
                f"fov_half_angle_deg must be in (0, 90), got {self.fov_half_angle_deg}"
            )
        if not 0.0 < self.filter_gain <= 1.0:
            problems.append(f"filter_gain must be in (0, 1], got {self.filter_gain}")
        if self.refractive_index < 1.0:
            problems.append(f"refractive_index must be >= 1, got {self.refractive_index}")
        if problems:
            raise ValueError("invalid optical front end: " + "; ".join(problems))

    @property
    def lambertian_order(self) -> float:
        return lambertian_order(self.semi_angle_deg)

    @property
    def lens_gain(self) -> float:
        return lens_gain(self.refractive_index, self.fov_half_angle_deg)

    @property
    def channel_constant(self) -> float:
        """Geometry-independent gain prefactor ``(m+1) rho A g_f g_l / (2 pi)``."""
        return (
            (self.lambertian_order + 1.0)
            * self.responsivity
            * self.area
            * self.filter_gain
            * self.lens_gain
            / (2.0 * math.pi)
        )


@dataclass(frozen=True)
class UserPosition:
    """Polar-cylindrical device location relative to the access point.

    Attributes:
        vertical: vertical distance to the access point, m, positive.
        horizontal: horizontal distance from the cell axis, m, non-negative.
        polar_angle: polar angle around the axis, radians. Carried for
            completeness; the LOS gain does not depend on it.
    """

    vertical: float
    horizontal: float
    polar_angle: float = 0.0

    def __post_init__(self) -> None:
        if self.vertical <= 0.0:
            raise ValueError(f"vertical distance must be positive, got {self.vertical}")
        if self.horizontal < 0.0:
            raise ValueError(f"horizontal distance must be >= 0, got {self.horizontal}")

    @property
    def distance(self) -> float:
        return math.hypot(self.vertical, self.horizontal)

    @property
    def incidence_angle(self) -> float:
        """Common emission/incidence angle, radians (vertical alignment)."""
        return math.atan(self.horizontal / self.vertical)


def channel_gain(position: UserPosition, front_end: OpticalFrontEnd) -> float:
    """LOS channel gain between the access point and one device.

    The gain is ``C / (l^2 + r^2) * cos(arctan(r/l))^(m+1)`` while the device
    sits inside the receiver FOV and exactly 0 outside it. The FOV boundary
    ``r/l == tan(FOV)`` belongs to the visible branch.

    Args:
        position: device location.
        front_end: LED/PD parameters of the link.

    Returns:
        Dimensionless gain, >= 0; independent of ``position.polar_angle``.
    """
    ratio = position.horizontal / position.vertical
    if ratio > math.tan(math.radians(front_end.fov_half_angle_deg)):
        return 0.0
    attenuation = math.cos(math.atan(ratio)) ** (front_end.lambertian_order + 1.0)
    reach = position.vertical * position.vertical + position.horizontal * position.horizontal
    return front_end.channel_constant / reach * attenuation


@dataclass(frozen=True)
class NoiseModel:
    """Flat additive noise over the signal band.

    Attributes:
        psd: one-sided noise power spectral density, A^2/Hz, positive.
        bandwidth: signal bandwidth, Hz, positive.
    """

    psd: float = 1e-22
    bandwidth: float = 2e7

    def __post_init__(self) -> None:
        if self.psd <= 0.0:
            raise ValueError(f"noise PSD must be positive, got {self.psd}")
        if self.bandwidth <= 0.0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")

    @property
    def noise_power(self) -> float:
        """Total in-band noise power ``psd * bandwidth`` (relative units, A^2)."""
        return self.psd * self.bandwidth
