"""Rotation-matrix validation and Euler decomposition for head movements.

The camera frame follows the image convention: +x right, +y down, +z into
the screen. Angles are Tait-Bryan, intrinsic Y-X-Z: a head rotation is
``R = Ry(yaw) @ Rx(pitch) @ Rz(roll)``, which isolates nodding (pitch),
shaking (yaw), and tilting (roll) on separate axes.

All functions are pure and operate on flat tuples; they sit on the per-frame
hot path, so no array types are allocated here.
"""

from __future__ import annotations

import math
from typing import Sequence

from .errors import NonOrthonormalError
from .signals import EulerAngles

ORTHO_TOL = 1e-3
_GIMBAL_PITCH_DEG = 89.9

RotationMatrix = tuple[float, float, float, float, float, float, float, float, float]

IDENTITY_ROTATION: RotationMatrix = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)


def validate_rotation(m: Sequence[float]) -> RotationMatrix:
    """Extract and validate the rotation block of a 4x4 head transform.

    Args:
        m: 16 finite floats, row-major. The translation column and bottom
            row are ignored.

    Returns:
        The upper-left 3x3 block as a flat row-major tuple.

    Raises:
        NonOrthonormalError: rows are not orthonormal within 1e-3, or the
            determinant is not +1 within 1e-3 (corrupted detector output).
    """
    if len(m) != 16:
        raise NonOrthonormalError(f"expected 16 entries, got {len(m)}")
    r00, r01, r02 = m[0], m[1], m[2]
    r10, r11, r12 = m[4], m[5], m[6]
    r20, r21, r22 = m[8], m[9], m[10]
    for v in (r00, r01, r02, r10, r11, r12, r20, r21, r22):
        if not math.isfinite(v):
            raise NonOrthonormalError("non-finite rotation entry")

    n0 = r00 * r00 + r01 * r01 + r02 * r02
    n1 = r10 * r10 + r11 * r11 + r12 * r12
    n2 = r20 * r20 + r21 * r21 + r22 * r22
    d01 = r00 * r10 + r01 * r11 + r02 * r12
    d02 = r00 * r20 + r01 * r21 + r02 * r22
    d12 = r10 * r20 + r11 * r21 + r12 * r22
    if (abs(n0 - 1.0) > ORTHO_TOL or abs(n1 - 1.0) > ORTHO_TOL
            or abs(n2 - 1.0) > ORTHO_TOL or abs(d01) > ORTHO_TOL
            or abs(d02) > ORTHO_TOL or abs(d12) > ORTHO_TOL):
        raise NonOrthonormalError("rows not orthonormal")

    det = (r00 * (r11 * r22 - r12 * r21)
           - r01 * (r10 * r22 - r12 * r20)
           + r02 * (r10 * r21 - r11 * r20))
    if abs(det - 1.0) > ORTHO_TOL:
        raise NonOrthonormalError(f"determinant {det:.6f} != +1")

    return (r00, r01, r02, r10, r11, r12, r20, r21, r22)


def extract_euler(r: RotationMatrix) -> EulerAngles:
    """Decompose a valid rotation into (pitch, yaw, roll) degrees.

    Closed forms for the Y-X-Z convention: pitch = asin(-R[1][2]),
    yaw = atan2(R[0][2], R[2][2]), roll = atan2(R[1][0], R[1][1]). The asin
    argument is clamped so float noise slightly outside [-1, 1] never yields
    NaN. Near gimbal lock (|pitch| >= 89.9 deg) roll is folded into yaw and
    reported as zero; a seated attendee cannot reach that pose.
    """
    s = -r[5]
    if s > 1.0:
        s = 1.0
    elif s < -1.0:
        s = -1.0
    pitch = math.degrees(math.asin(s))
    if abs(pitch) >= _GIMBAL_PITCH_DEG:
        if pitch > 0:
            yaw = math.degrees(math.atan2(r[1], r[0]))
        else:
            yaw = math.degrees(math.atan2(-r[1], r[0]))
        return EulerAngles(pitch=pitch, yaw=yaw, roll=0.0)
    yaw = math.degrees(math.atan2(r[2], r[8]))
    roll = math.degrees(math.atan2(r[3], r[4]))
    return EulerAngles(pitch=pitch, yaw=yaw, roll=roll)


def rotation_from_euler(pitch: float, yaw: float, roll: float) -> RotationMatrix:
    """Compose Ry(yaw) @ Rx(pitch) @ Rz(roll) from angles in degrees."""
    p = math.radians(pitch)
    y = math.radians(yaw)
    z = math.radians(roll)
    cp, sp = math.cos(p), math.sin(p)
    cy, sy = math.cos(y), math.sin(y)
    cz, sz = math.cos(z), math.sin(z)
    return (
        cy * cz + sy * sp * sz, -cy * sz + sy * sp * cz, sy * cp,
        cp * sz, cp * cz, -sp,
        -sy * cz + cy * sp * sz, sy * sz + cy * sp * cz, cy * cp,
    )


def pose_matrix(pitch: float, yaw: float, roll: float,
                tx: float = 0.0, ty: float = 0.0, tz: float = 0.0) -> tuple[float, ...]:
    """Build a 4x4 homogeneous head transform from angles (degrees)."""
    r = rotation_from_euler(pitch, yaw, roll)
    return (
        r[0], r[1], r[2], tx,
        r[3], r[4], r[5], ty,
        r[6], r[7], r[8], tz,
        0.0, 0.0, 0.0, 1.0,
    )
