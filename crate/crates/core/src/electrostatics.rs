//! Point charge `q` at distance `a` from the centre of an isolated conducting
//! sphere of radius `R` carrying total charge `Q`, in Gaussian units.

use crate::error::{domain, Error, Result};
use crate::numerics::{find_root, minimize_golden, scan_bracket};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereChargeSystem {
    pub radius: f64,
    pub sphere_charge: f64,
    pub q: f64,
    pub a: f64,
}

impl SphereChargeSystem {
    pub fn new(radius: f64, sphere_charge: f64, q: f64, a: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return domain(format!("sphere radius must be positive, got {radius}"));
        }
        if !(a > radius) {
            return domain(format!("charge must sit outside the sphere: a = {a}, R = {radius}"));
        }
        Ok(Self {
            radius,
            sphere_charge,
            q,
            a,
        })
    }

    /// True when the charges repel at infinity.
    pub fn like_charges(&self) -> bool {
        self.q * self.sphere_charge > 0.0
    }
}

/// Image charge `q1` at distance `d` on the axis and `q0` at the centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSystem {
    pub d: f64,
    pub q1: f64,
    pub q0: f64,
}

pub fn image_system(s: &SphereChargeSystem) -> ImageSystem {
    let ratio = s.radius / s.a;
    ImageSystem {
        d: s.radius * ratio,
        q1: -s.q * ratio,
        q0: s.sphere_charge + s.q * ratio,
    }
}

/// Electrostatic potential at `(x, y, z)`; constant `q0/R` inside the sphere.
pub fn potential(s: &SphereChargeSystem, x: f64, y: f64, z: f64) -> Result<f64> {
    let r = (x * x + y * y + z * z).sqrt();
    if r < s.radius {
        return Ok(image_system(s).q0 / s.radius);
    }
    exterior_potential(s, x, y, z)
}

/// Sum of the three Coulomb terms, valid on and outside the sphere.
pub fn exterior_potential(s: &SphereChargeSystem, x: f64, y: f64, z: f64) -> Result<f64> {
    let img = image_system(s);
    let r = (x * x + y * y + z * z).sqrt();
    let yz = y * y + z * z;
    let to_charge = ((x - s.a).powi(2) + yz).sqrt();
    if to_charge <= 1e-12 * s.a {
        return Err(Error::SingularPoint(format!("potential at the point charge ({x}, {y}, {z})")));
    }
    let to_image = ((x - img.d).powi(2) + yz).sqrt();
    Ok(s.q / to_charge + img.q1 / to_image + img.q0 / r)
}

/// Force on the point charge along the axis (positive = repulsive).
pub fn force(s: &SphereChargeSystem) -> f64 {
    let (a, r, q) = (s.a, s.radius, s.q);
    let x = r * r / (a * a);
    q * s.sphere_charge / (a * a) + q * q * r / a.powi(3) * (1.0 - 1.0 / (1.0 - x).powi(2))
}

/// Interaction energy `W(a) = qQ/a + ½ q (q1/(a − d) + (qR/a)/a)` built from
/// the image charges, so that `F = −dW/da`.
pub fn interaction_energy(s: &SphereChargeSystem) -> f64 {
    let img = image_system(s);
    let induced_centre = s.q * s.radius / s.a;
    s.q * s.sphere_charge / s.a + 0.5 * s.q * (img.q1 / (s.a - img.d) + induced_centre / s.a)
}

/// `f(s) = α/s² − (2s² − 1)/(s³ (s² − 1)²)`, equal to `R² F / q²` with
/// `α = Q/q` and `s = a/R`.
pub fn dimensionless_force(alpha: f64, s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return domain(format!("dimensionless distance must exceed 1, got {s}"));
    }
    Ok(alpha / (s * s) - (2.0 * s * s - 1.0) / (s.powi(3) * (s * s - 1.0).powi(2)))
}

/// Attraction term `(2s² − 1)/(s (s² − 1)²)` balanced against `α` at
/// equilibrium.
pub fn balance_lhs(s: f64) -> f64 {
    (2.0 * s * s - 1.0) / (s * (s * s - 1.0).powi(2))
}

const SCAN_LO: f64 = 1.0 + 1e-4;
const SCAN_HI: f64 = 1e3;

/// Root `s₀ > 1` of `f`, i.e. the distance at which the force vanishes.
pub fn equilibrium_distance(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    let g = |s: f64| balance_lhs(s) - alpha;
    let (lo, hi) = scan_bracket(g, SCAN_LO, SCAN_HI, 400).ok_or(Error::NoSignChange {
        lo: SCAN_LO,
        hi: SCAN_HI,
    })?;
    find_root(g, (lo, hi), 1e-14)
}

/// Location and value `(s_max, f_max)` of the repulsive maximum beyond `s₀`.
pub fn force_maximum(alpha: f64) -> Result<(f64, f64)> {
    let s0 = equilibrium_distance(alpha)?;
    // Bracket the peak on a geometric grid before the golden-section search.
    let n = 2000;
    let ratio = (SCAN_HI / s0).powf(1.0 / n as f64);
    let mut best = (s0, 0.0);
    for i in 1..n {
        let s = s0 * ratio.powi(i);
        let f = dimensionless_force(alpha, s)?;
        if f > best.1 {
            best = (s, f);
        }
    }
    let lo = (best.0 / ratio).max(s0);
    let hi = (best.0 * ratio).min(SCAN_HI);
    let (s, neg) = minimize_golden(|s| -dimensionless_force(alpha, s).unwrap(), lo, hi, 1e-10);
    Ok((s, -neg))
}

/// Number of sign changes of `f` on a geometric grid over `(1 + 10⁻⁴, 10³)`.
pub fn sign_changes(alpha: f64, points: usize) -> usize {
    let ratio = (SCAN_HI / SCAN_LO).powf(1.0 / (points - 1) as f64);
    let mut prev = dimensionless_force(alpha, SCAN_LO).unwrap().signum();
    let mut count = 0;
    for i in 1..points {
        let sign = dimensionless_force(alpha, SCAN_LO * ratio.powi(i as i32)).unwrap().signum();
        if sign != prev && sign != 0.0 {
            count += 1;
            prev = sign;
        }
    }
    count
}

/// Sample `n` points on the sphere surface on a golden-angle spiral and
/// return the largest relative deviation of the potential from `q0/R`.
pub fn surface_spread(s: &SphereChargeSystem, n: usize) -> Result<f64> {
    let target = image_system(s).q0 / s.radius;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut worst: f64 = 0.0;
    let scale = target.abs().max((s.q / (s.a - s.radius)).abs());
    for i in 0..n {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
        let rho = (1.0 - z * z).sqrt();
        let phi = golden * i as f64;
        let r = s.radius;
        let v = exterior_potential(s, r * rho * phi.cos(), r * rho * phi.sin(), r * z)?;
        worst = worst.max((v - target).abs());
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn image_values() {
        let s = SphereChargeSystem::new(1.0, 0.0, 1.0, 2.0).unwrap();
        let img = image_system(&s);
        assert_eq!((img.d, img.q1, img.q0), (0.5, -0.5, 0.5));
        let far = SphereChargeSystem::new(1.0, 3.0, 1.0, 1e12).unwrap();
        let img = image_system(&far);
        assert!(img.q1.abs() < 1e-11 && (img.q0 - 3.0).abs() < 1e-11);
        let none = image_system(&SphereChargeSystem::new(1.0, 3.0, 0.0, 2.0).unwrap());
        assert_eq!((none.q1, none.q0), (0.0, 3.0));
        assert!(SphereChargeSystem::new(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn potential_limits() {
        let s = SphereChargeSystem::new(1.0, 2.0, 1.0, 3.0).unwrap();
        let img = image_system(&s);
        assert!((potential(&s, 1.0, 0.0, 0.0).unwrap() - img.q0).abs() < 1e-10);
        assert_eq!(potential(&s, 0.2, 0.1, 0.0).unwrap(), img.q0);
        assert!((potential(&s, 1e6, 0.0, 0.0).unwrap() * 1e6 - 3.0).abs() < 1e-5);
        assert!(matches!(potential(&s, 3.0, 0.0, 0.0), Err(Error::SingularPoint(_))));
        assert!(surface_spread(&s, 200).unwrap() < 1e-9);
    }

    #[test]
    fn force_limits() {
        let r = 1.0;
        let delta = 1e-4;
        let s = SphereChargeSystem::new(r, 1.0, 1.0, r + delta).unwrap();
        assert!((force(&s) * (2.0 * delta).powi(2) + 1.0).abs() < 1e-3);
        let s = SphereChargeSystem::new(r, 1.0, 2.0, 1e6).unwrap();
        assert!((force(&s) * 1e12 / 2.0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn force_is_energy_gradient() {
        for (q, big_q, a) in [(1.0, 2.0, 1.7), (-0.5, 3.0, 4.0), (2.0, -1.0, 1.2)] {
            let s = SphereChargeSystem::new(1.0, big_q, q, a).unwrap();
            let h = 1e-5;
            let w = |a| interaction_energy(&SphereChargeSystem { a, ..s });
            let fd = -(w(a + h) - w(a - h)) / (2.0 * h);
            assert!((fd - force(&s)).abs() <= 1e-6 * force(&s).abs());
        }
    }

    #[test]
    fn dimensionless_identity() {
        let s = SphereChargeSystem::new(2.0, 3.0, 1.5, 5.0).unwrap();
        let f = dimensionless_force(3.0 / 1.5, 5.0 / 2.0).unwrap();
        assert!((f - force(&s) * 4.0 / 2.25).abs() < 1e-12);
        assert!(dimensionless_force(1.0, 1.0).is_err());
        assert!((dimensionless_force(2.0, 1e5).unwrap() * 1e10 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn published_equilibria_and_maxima() {
        for (alpha, s0, smax, fmax) in [(2.0, 1.43, 1.79, 0.43), (1.0, 1.62, 2.07, 0.15), (0.5, 1.88, 2.46, 0.05)] {
            assert!((equilibrium_distance(alpha).unwrap() - s0).abs() <= 0.01);
            let (s, f) = force_maximum(alpha).unwrap();
            assert!((s - smax).abs() <= 0.01 && (f - fmax).abs() <= 0.01, "alpha={alpha}: {s} {f}");
        }
    }

    #[test]
    fn single_sign_change_and_self_consistency() {
        for alpha in [0.05, 0.1, 0.3, 1.0, 3.0, 10.0, 20.0] {
            assert_eq!(sign_changes(alpha, 20_000), 1, "alpha={alpha}");
            let s0 = equilibrium_distance(alpha).unwrap();
            assert!(dimensionless_force(alpha, s0).unwrap().abs() <= 1e-10);
        }
    }

    proptest::proptest! {
        #[test]
        fn attractive_near_contact(alpha in 0.01f64..50.0) {
            proptest::prop_assert!(dimensionless_force(alpha, 1.0 + 1e-3).unwrap() < 0.0);
        }

        #[test]
        fn equipotential_random_systems(r in 0.2f64..3.0, big_q in -5.0f64..5.0, q in -5.0f64..5.0, gap in 0.05f64..10.0) {
            let s = SphereChargeSystem::new(r, big_q, q, r + gap).unwrap();
            proptest::prop_assert!(surface_spread(&s, 200).unwrap() <= 1e-9);
        }
    }
}
