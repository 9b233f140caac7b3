//! Earth–Sun geometry for the static Eötvös balance.
//!
//! Vectors are expressed either in the co-orbiting Earth-centred frame
//! (`x` towards the Sun, `z` normal to the ecliptic) or in the rotating lab
//! frame of the balance (`x` due south, `z` up along the local plumb line of
//! the Earth's field). The lab triad is built exactly as the products of the
//! axial-tilt matrix with the spin-phase vectors; with `x` south and `z` up the
//! `y` axis points west, so `x_hat x y_hat = -z_hat`. Lab components are dot
//! products with that orthonormal triad.
//!
//! The orbit is circular. The orbital phase rotates the tilted spin axis about
//! the ecliptic normal; phase zero is the northern winter solstice with the Sun
//! on the `+x` axis.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, o: &Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn unit(&self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `a . (b x c)`
    pub fn triple(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
        a.dot(&b.cross(c))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
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

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// Parameters of the Earth–Sun configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EotvosGeometry {
    /// Latitude of the balance (rad).
    pub latitude: f64,
    /// Axial tilt of the Earth relative to the ecliptic (rad).
    pub axial_tilt: f64,
    /// Spin rate of the Earth (rad/s).
    pub spin_rate: f64,
    /// Orbital rate of the Earth about the Sun (rad/s).
    pub orbital_rate: f64,
    /// Orbital phase measured from the northern winter solstice (rad).
    pub orbital_phase: f64,
    pub earth_radius: f64,
    /// Earth–Sun distance (m).
    pub sun_distance: f64,
    /// Local gravitational acceleration of the Earth (m/s^2).
    pub g_earth: f64,
    pub g_newton: f64,
    pub sun_mass: f64,
}

impl Default for EotvosGeometry {
    fn default() -> Self {
        Self {
            latitude: 45f64.to_radians(),
            axial_tilt: 23.4f64.to_radians(),
            spin_rate: 7.292_115e-5,
            orbital_rate: 1.991_021e-7,
            orbital_phase: 0.0,
            earth_radius: 6.371e6,
            sun_distance: 1.495_978_707e11,
            g_earth: 9.81,
            g_newton: crate::G_NEWTON,
            sun_mass: 1.988_47e30,
        }
    }
}

impl EotvosGeometry {
    pub fn with_latitude(mut self, latitude: f64) -> Self {
        self.latitude = latitude;
        self
    }

    /// Radii and `g_earth` must be positive; rates and the solar mass may be
    /// zero to switch the corresponding forces off.
    pub fn validate(&self) -> Result<()> {
        if !(self.latitude.abs() <= FRAC_PI_2) {
            return Err(Error::param(
                "latitude",
                "|latitude| <= pi/2",
                self.latitude,
            ));
        }
        if !self.axial_tilt.is_finite() {
            return Err(Error::param(
                "axial_tilt",
                "must be finite",
                self.axial_tilt,
            ));
        }
        if !self.orbital_phase.is_finite() {
            return Err(Error::param(
                "orbital_phase",
                "must be finite",
                self.orbital_phase,
            ));
        }
        let positive = [
            ("earth_radius", self.earth_radius),
            ("sun_distance", self.sun_distance),
            ("g_earth", self.g_earth),
            ("g_newton", self.g_newton),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, "must be > 0", v));
            }
        }
        let non_negative = [
            ("spin_rate", self.spin_rate),
            ("orbital_rate", self.orbital_rate),
            ("sun_mass", self.sun_mass),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::param(name, "must be >= 0", v));
            }
        }
        Ok(())
    }
}

/// Orientation and length of the balance arm vector `r_AB`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceGeometry {
    /// Balance length `|r_AB|` (m).
    pub length: f64,
    /// Orientation relative to the lab `x` axis (rad).
    pub theta_tilde: f64,
    /// Fiber-tilt angle (rad).
    pub phi_tilde: f64,
}

impl BalanceGeometry {
    pub fn new(length: f64, theta_tilde: f64, phi_tilde: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::param("length", "balance length > 0", length));
        }
        if !theta_tilde.is_finite() || !phi_tilde.is_finite() {
            return Err(Error::param(
                "theta_tilde/phi_tilde",
                "must be finite",
                f64::NAN,
            ));
        }
        Ok(Self {
            length,
            theta_tilde,
            phi_tilde,
        })
    }

    /// `l (cos phi~ cos theta~, cos phi~ sin theta~, sin phi~)`.
    pub fn r_ab(&self) -> Vec3 {
        let (st, ct) = self.theta_tilde.sin_cos();
        let (sp, cp) = self.phi_tilde.sin_cos();
        Vec3::new(cp * ct, cp * st, sp) * self.length
    }
}

/// Lab unit vectors expressed in co-orbiting components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabFrame {
    pub x: Vec3,
    pub y: Vec3,
    pub z: Vec3,
}

impl LabFrame {
    /// Components of a co-orbiting vector along the lab axes.
    pub fn to_lab(&self, v: &Vec3) -> Vec3 {
        Vec3::new(self.x.dot(v), self.y.dot(v), self.z.dot(v))
    }

    /// Co-orbiting vector from lab components.
    pub fn from_lab(&self, v: &Vec3) -> Vec3 {
        self.x * v.x + self.y * v.y + self.z * v.z
    }
}

/// Rotation by the axial tilt about the co-orbiting `y` axis.
fn tilt(eps: f64, v: Vec3) -> Vec3 {
    let (s, c) = eps.sin_cos();
    Vec3::new(c * v.x - s * v.z, v.y, s * v.x + c * v.z)
}

/// Rotation by `-phase` about the ecliptic normal.
fn orbital(phase: f64, v: Vec3) -> Vec3 {
    if phase == 0.0 {
        return v;
    }
    let (s, c) = phase.sin_cos();
    Vec3::new(c * v.x + s * v.y, -s * v.x + c * v.y, v.z)
}

pub fn lab_unit_vectors(geo: &EotvosGeometry, t: f64) -> LabFrame {
    let (sw, cw) = (geo.spin_rate * t).sin_cos();
    let (sl, cl) = geo.latitude.sin_cos();
    let place = |v: Vec3| orbital(geo.orbital_phase, tilt(geo.axial_tilt, v));
    LabFrame {
        x: place(Vec3::new(sl * cw, sl * sw, -cl)),
        y: place(Vec3::new(sw, -cw, 0.0)),
        z: place(Vec3::new(cl * cw, cl * sw, sl)),
    }
}

/// Balance-to-Sun vector and the Earth-to-Sun direction, both in lab components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SunPointing {
    /// `d = R_sun - R_earth(t)` (m).
    pub d: Vec3,
    /// Unit vector from the Earth's centre to the Sun.
    pub sun_hat: Vec3,
}

pub fn sun_pointing_vectors(geo: &EotvosGeometry, t: f64) -> SunPointing {
    let frame = lab_unit_vectors(geo, t);
    let sun_hat = frame.to_lab(&Vec3::X);
    let d = sun_hat * geo.sun_distance - Vec3::Z * geo.earth_radius;
    SunPointing { d, sun_hat }
}

/// Acceleration multiplying the inertial mass in the net force (m/s^2, lab
/// components): Earth-spin centrifugal term plus the orbital inertial term,
/// which points away from the Sun.
pub fn beta_vector(geo: &EotvosGeometry, t: f64) -> Vec3 {
    let (sl, cl) = geo.latitude.sin_cos();
    let spin = Vec3::new(sl, 0.0, cl) * (geo.spin_rate.powi(2) * geo.earth_radius * cl);
    let sun = sun_pointing_vectors(geo, t);
    spin - sun.sun_hat * (geo.orbital_rate.powi(2) * geo.sun_distance)
}

/// Acceleration multiplying the gravitational mass in the net force (m/s^2,
/// lab components): solar attraction plus the Earth's field along `-z`.
pub fn gamma_vector(geo: &EotvosGeometry, t: f64) -> Result<Vec3> {
    let d = sun_pointing_vectors(geo, t).d;
    let dist = d.norm();
    if !(dist > 0.0) {
        return Err(Error::Singular(format!(
            "balance coincides with the Sun at t = {t}"
        )));
    }
    let gm = geo.g_newton * geo.sun_mass;
    Ok(d * (gm / dist.powi(3)) - Vec3::Z * geo.g_earth)
}

/// Fiber-tilt angle `phi~` with `cos phi~ = T_hat . z_hat` for a balance with
/// equal classical masses, where the tension is `T = -(F_A + F_B)`.
pub fn fiber_tilt(geo: &EotvosGeometry, t: f64) -> Result<f64> {
    let net = beta_vector(geo, t) + gamma_vector(geo, t)?;
    let tension = (-net)
        .unit()
        .ok_or_else(|| Error::Singular(format!("zero net force at t = {t}")))?;
    Ok(tension.z.clamp(-1.0, 1.0).acos())
}
