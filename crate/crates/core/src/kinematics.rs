//! Transformation formulas: Lorentz factor, Galilean and Lorentz
//! boosts, relativistic velocity addition, Thomas rotation and the
//! polar decomposition of a composed transform.

use crate::error::Error;
use crate::vecmat::{Event, Mat3, Mat4, Vec3};
use serde::{Deserialize, Serialize};

/// Speed of light. Any positive finite value; defaults to 1 (natural units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightSpeed(f64);

impl LightSpeed {
    pub const NATURAL: LightSpeed = LightSpeed(1.0);

    pub fn new(c: f64) -> Result<LightSpeed, Error> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::NonFinite { what: format!("light speed {c}") });
        }
        Ok(LightSpeed(c))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl Default for LightSpeed {
    fn default() -> Self {
        LightSpeed::NATURAL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Classical,
    Relativistic,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Classical => write!(f, "classical"),
            Regime::Relativistic => write!(f, "relativistic"),
        }
    }
}

/// A 3-velocity tagged with its regime. Classical velocities may have
/// any finite magnitude; relativistic ones are strictly slower than
/// light, rejected at construction (the light-speed boundary included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Velocity {
    v: Vec3,
    regime: Regime,
}

impl Velocity {
    pub fn classical(v: Vec3) -> Result<Velocity, Error> {
        if !v.is_finite() {
            return Err(Error::NonFinite { what: "velocity".into() });
        }
        Ok(Velocity { v, regime: Regime::Classical })
    }

    pub fn relativistic(v: Vec3, c: LightSpeed) -> Result<Velocity, Error> {
        if !v.is_finite() {
            return Err(Error::NonFinite { what: "velocity".into() });
        }
        let speed = v.norm();
        if speed >= c.value() {
            return Err(Error::Superluminal { speed, c: c.value() });
        }
        Ok(Velocity { v, regime: Regime::Relativistic })
    }

    pub fn vector(&self) -> Vec3 {
        self.v
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn speed(&self) -> f64 {
        self.v.norm()
    }

    /// Same vector, opposite sign. Stays inside the regime's constraint.
    pub fn reversed(&self) -> Velocity {
        Velocity { v: -self.v, regime: self.regime }
    }
}

fn require_subluminal(v: &Velocity, c: LightSpeed) -> Result<(), Error> {
    let speed = v.speed();
    if speed >= c.value() {
        return Err(Error::Superluminal { speed, c: c.value() });
    }
    Ok(())
}

/// gamma = 1 / sqrt(1 - |v|^2 / c^2)
pub fn lorentz_factor(v: &Velocity, c: LightSpeed) -> Result<f64, Error> {
    require_subluminal(v, c)?;
    let beta2 = v.vector().norm_squared() / (c.value() * c.value());
    Ok(1.0 / (1.0 - beta2).sqrt())
}

/// (t, x) -> (t, x - v t)
pub fn galilean_apply(v: &Velocity, e: &Event) -> Event {
    Event::new(e.t, e.x - v.vector() * e.t)
}

/// Boost of a displacement:
/// (t, x) -> (gamma (t - <v,x>/c^2), x + (gamma-1) <v,x>/|v|^2 v - gamma v t).
///
/// The singular factor (gamma-1)/|v|^2 is evaluated as
/// gamma^2 / (c^2 (gamma+1)), which is algebraically identical and
/// finite at v = 0.
pub fn boost_apply(v: &Velocity, c: LightSpeed, e: &Event) -> Result<Event, Error> {
    let gamma = lorentz_factor(v, c)?;
    let c2 = c.value() * c.value();
    let vx = v.vector().dot(&e.x);
    let k = gamma * gamma / (c2 * (gamma + 1.0));
    let t = gamma * (e.t - vx / c2);
    let x = e.x + v.vector() * (k * vx) - v.vector() * (gamma * e.t);
    Ok(Event::new(t, x))
}

/// Matrix form of the boost: M00 = gamma, M0i = -gamma v_i / c^2,
/// Mi0 = -gamma v_i, spatial block I + (gamma-1) v v^T / |v|^2.
pub fn boost_matrix(v: &Velocity, c: LightSpeed) -> Result<Mat4, Error> {
    let gamma = lorentz_factor(v, c)?;
    let c2 = c.value() * c.value();
    let k = gamma * gamma / (c2 * (gamma + 1.0));
    let vv = v.vector();
    let comps = [vv.x, vv.y, vv.z];
    let mut m = [[0.0; 4]; 4];
    m[0][0] = gamma;
    for i in 0..3 {
        m[0][i + 1] = -gamma * comps[i] / c2;
        m[i + 1][0] = -gamma * comps[i];
        for j in 0..3 {
            m[i + 1][j + 1] = if i == j { 1.0 } else { 0.0 } + k * comps[i] * comps[j];
        }
    }
    Ok(Mat4::new(m))
}

/// Matrix form of the Galilean boost: unit time row, -v in the
/// space-time column, identity spatial block.
pub fn galilean_matrix(v: &Velocity) -> Mat4 {
    let vv = v.vector();
    let mut m = Mat4::IDENTITY.m;
    m[1][0] = -vv.x;
    m[2][0] = -vv.y;
    m[3][0] = -vv.z;
    Mat4::new(m)
}

/// Component-wise sum of classical velocities.
pub fn classical_add(u: &Velocity, v: &Velocity) -> Result<Velocity, Error> {
    Velocity::classical(u.vector() + v.vector())
}

/// Relativistic velocity addition, matching the boost composition
/// convention B(u) B(v) = R B(u (+) v): the result is the boost part of
/// the composed transform. Non-commutative for non-collinear inputs;
/// closed under |.| < c.
pub fn einstein_add(u: &Velocity, v: &Velocity, c: LightSpeed) -> Result<Velocity, Error> {
    require_subluminal(u, c)?;
    let gamma_v = lorentz_factor(v, c)?;
    let c2 = c.value() * c.value();
    let uv = u.vector().dot(&v.vector());
    let num = v.vector()
        + u.vector() * (1.0 / gamma_v)
        + v.vector() * (gamma_v / (c2 * (1.0 + gamma_v)) * uv);
    let w = num * (1.0 / (1.0 + uv / c2));
    Velocity::relativistic(w, c)
}

/// A Lorentz transform split into a proper rotation followed by a boost:
/// `rotation-as-Mat4 * boost_matrix(velocity)` reproduces the source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostDecomposition {
    pub rotation: Mat3,
    pub velocity: Velocity,
}

impl BoostDecomposition {
    pub fn identity() -> BoostDecomposition {
        BoostDecomposition {
            rotation: Mat3::IDENTITY,
            velocity: Velocity { v: Vec3::ZERO, regime: Regime::Relativistic },
        }
    }

    pub fn reassemble(&self, c: LightSpeed) -> Result<Mat4, Error> {
        Ok(Mat4::from_rotation(&self.rotation) * boost_matrix(&self.velocity, c)?)
    }
}

/// Polar decomposition of an orthochronous Lorentz transform.
///
/// The boost velocity is read off the top row, w_i = -c^2 M0i / M00,
/// which left-multiplication by a spatial rotation leaves unchanged;
/// the rotation is then the spatial block of m * boost_matrix(w)^-1.
pub fn decompose_lorentz(m: &Mat4, c: LightSpeed) -> Result<BoostDecomposition, Error> {
    decompose_lorentz_tol(m, c, crate::default_tolerance())
}

/// [`decompose_lorentz`] with an explicit validation tolerance.
pub fn decompose_lorentz_tol(
    m: &Mat4,
    c: LightSpeed,
    tol: f64,
) -> Result<BoostDecomposition, Error> {
    let deviation = m.minkowski_deviation(c.value());
    if !(deviation < tol) {
        return Err(Error::NotLorentz { deviation });
    }
    if !(m.m[0][0] > 0.0) {
        return Err(Error::NonOrthochronous { entry: m.m[0][0] });
    }
    let c2 = c.value() * c.value();
    let w = Vec3::new(
        -c2 * m.m[0][1] / m.m[0][0],
        -c2 * m.m[0][2] / m.m[0][0],
        -c2 * m.m[0][3] / m.m[0][0],
    );
    let velocity = Velocity::relativistic(w, c)?;
    let boost_inv = boost_matrix(&velocity.reversed(), c)?;
    let rotation = (*m * boost_inv).spatial_block();
    Ok(BoostDecomposition { rotation, velocity })
}

/// Thomas rotation of two boosts: the proper rotation R with
/// R (as Mat4) * B(u (+) v) = B(u) * B(v).
pub fn gyration(u: &Velocity, v: &Velocity, c: LightSpeed) -> Result<Mat3, Error> {
    let product = boost_matrix(u, c)? * boost_matrix(v, c)?;
    // the product is Lorentz up to roundoff; validate loosely
    let decomp = decompose_lorentz_tol(&product, c, 1e-6)?;
    Ok(decomp.rotation)
}

/// Minkowski interval of a displacement: c^2 t^2 - |x|^2.
pub fn interval(e: &Event, c: LightSpeed) -> f64 {
    c.value() * c.value() * e.t * e.t - e.x.norm_squared()
}
