//! Small fixed-size linear algebra: 3-vectors, 3x3 rotations, 4x4
//! spacetime transforms and the spacetime displacement type.
//!
//! Coordinate order is `(t, x, y, z)`. In a [`Mat4`] the entry `(0,0)`
//! is time-time, row 0 columns 1-3 are time-space, rows 1-3 column 0
//! are space-time and the lower-right 3x3 block is space-space. The
//! Minkowski form is `eta = diag(c^2, -1, -1, -1)`. This module is the
//! single source of sign conventions for the whole crate.

use crate::error::Error;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Some unit vector orthogonal to `self`. Picks the coordinate axis
    /// least aligned with `self` and projects it out.
    pub fn any_orthogonal_unit(&self) -> Option<Vec3> {
        let n = self.norm();
        if n == 0.0 {
            return None;
        }
        let ax = self.x.abs();
        let ay = self.y.abs();
        let az = self.z.abs();
        let basis = if ax <= ay && ax <= az {
            Vec3::new(1.0, 0.0, 0.0)
        } else if ay <= az {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        let proj = self.dot(&basis) / (n * n);
        let orth = basis - *self * proj;
        let on = orth.norm();
        Some(orth * (1.0 / on))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Euclidean inner product of two 3-vectors.
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a.dot(b)
}

/// Row-major 3x3 matrix. Tagged rotations must satisfy
/// [`Mat3::rotation_deviation`] below the working tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3 {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    pub fn new(m: [[f64; 3]; 3]) -> Mat3 {
        Mat3 { m }
    }

    pub fn transpose(&self) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.m[j][i];
            }
        }
        Mat3::new(out)
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn max_abs_diff(&self, other: &Mat3) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }

    /// How far the matrix is from being a proper rotation:
    /// `max(||M^T M - I||_inf, |det(M) - 1|)`.
    pub fn rotation_deviation(&self) -> f64 {
        let gram = self.transpose() * *self;
        gram.max_abs_diff(&Mat3::IDENTITY).max((self.det() - 1.0).abs())
    }

    pub fn is_rotation(&self, tol: f64) -> bool {
        self.rotation_deviation() < tol
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += self.m[i][k] * rhs.m[k][j];
                }
                out[i][j] = acc;
            }
        }
        Mat3::new(out)
    }
}

/// Rodrigues rotation about `axis` by `angle` radians.
pub fn rotation_from_axis_angle(axis: &Vec3, angle: f64) -> Result<Mat3, Error> {
    let n = axis.norm();
    if !(n > 1e-300) {
        return Err(Error::ZeroAxis);
    }
    let u = *axis * (1.0 / n);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    let (ux, uy, uz) = (u.x, u.y, u.z);
    Ok(Mat3::new([
        [c + ux * ux * t, ux * uy * t - uz * s, ux * uz * t + uy * s],
        [uy * ux * t + uz * s, c + uy * uy * t, uy * uz * t - ux * s],
        [uz * ux * t - uy * s, uz * uy * t + ux * s, c + uz * uz * t],
    ]))
}

/// Row-major 4x4 spacetime transform in `(t, x, y, z)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat4 {
    pub m: [[f64; 4]; 4],
}

impl Mat4 {
    pub const IDENTITY: Mat4 = Mat4 {
        m: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    };

    pub fn new(m: [[f64; 4]; 4]) -> Mat4 {
        Mat4 { m }
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|e| e.is_finite())
    }

    /// Embeds a spatial rotation with a trivial time row and column.
    pub fn from_rotation(r: &Mat3) -> Mat4 {
        let mut m = Mat4::IDENTITY.m;
        for i in 0..3 {
            for j in 0..3 {
                m[i + 1][j + 1] = r.m[i][j];
            }
        }
        Mat4::new(m)
    }

    /// The space-space 3x3 block.
    pub fn spatial_block(&self) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.m[i + 1][j + 1];
            }
        }
        Mat3::new(out)
    }

    pub fn transpose(&self) -> Mat4 {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.m[j][i];
            }
        }
        Mat4::new(out)
    }

    pub fn apply(&self, e: &Event) -> Event {
        let col = [e.t, e.x.x, e.x.y, e.x.z];
        let mut out = [0.0; 4];
        for i in 0..4 {
            for k in 0..4 {
                out[i] += self.m[i][k] * col[k];
            }
        }
        Event::new(out[0], Vec3::new(out[1], out[2], out[3]))
    }

    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0f64, |acc, e| acc.max(e.abs()))
    }

    pub fn det(&self) -> f64 {
        let mut d = 0.0;
        for j in 0..4 {
            d += self.m[0][j] * self.cofactor(0, j);
        }
        d
    }

    fn minor(&self, row: usize, col: usize) -> f64 {
        let mut sub = [[0.0; 3]; 3];
        let mut si = 0;
        for i in 0..4 {
            if i == row {
                continue;
            }
            let mut sj = 0;
            for j in 0..4 {
                if j == col {
                    continue;
                }
                sub[si][sj] = self.m[i][j];
                sj += 1;
            }
            si += 1;
        }
        Mat3::new(sub).det()
    }

    fn cofactor(&self, row: usize, col: usize) -> f64 {
        let sign = if (row + col) % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.minor(row, col)
    }

    /// Closed-form adjugate inverse. Adequate at this size.
    pub fn invert(&self) -> Result<Mat4, Error> {
        let det = self.det();
        if !det.is_finite() || det.abs() <= 1e-300 {
            return Err(Error::SingularMatrix { det });
        }
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                // adjugate transposes the cofactor matrix
                out[j][i] = self.cofactor(i, j) / det;
            }
        }
        Ok(Mat4::new(out))
    }

    /// Deviation from preserving the Minkowski form:
    /// `||M^T eta M - eta||_inf` with `eta = diag(c^2, -1, -1, -1)`.
    pub fn minkowski_deviation(&self, c: f64) -> f64 {
        let eta = [c * c, -1.0, -1.0, -1.0];
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += self.m[k][i] * eta[k] * self.m[k][j];
                }
                let target = if i == j { eta[i] } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        worst
    }

    /// Deviation from the Galilean shape: unit time-time entry, zero
    /// time-space row and identity space-space block (the space-time
    /// column is the free boost velocity).
    pub fn galilean_deviation(&self) -> f64 {
        let mut worst = (self.m[0][0] - 1.0).abs();
        for j in 1..4 {
            worst = worst.max(self.m[0][j].abs());
        }
        worst.max(self.spatial_block().max_abs_diff(&Mat3::IDENTITY))
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += self.m[i][k] * rhs.m[k][j];
                }
                out[i][j] = acc;
            }
        }
        Mat4::new(out)
    }
}

/// Matrix product; realizes composition of transformations.
pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    *a * *b
}

/// See [`Mat4::invert`].
pub fn mat4_invert(m: &Mat4) -> Result<Mat4, Error> {
    m.invert()
}

/// A spacetime displacement: a difference of temporal and spatial
/// coordinates between two events.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub x: Vec3,
}

impl Event {
    pub fn new(t: f64, x: Vec3) -> Event {
        Event { t, x }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite()
    }

    pub fn max_abs_diff(&self, other: &Event) -> f64 {
        (self.t - other.t).abs().max((self.x - other.x).max_abs())
    }
}

impl Add for Event {
    type Output = Event;
    fn add(self, rhs: Event) -> Event {
        Event::new(self.t + rhs.t, self.x + rhs.x)
    }
}

impl Mul<f64> for Event {
    type Output = Event;
    fn mul(self, s: f64) -> Event {
        Event::new(self.t * s, self.x * s)
    }
}
