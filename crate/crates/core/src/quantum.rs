//! Probability flux of plane and spherical waves, the twisted-boundary
//! torus spectrum with its flux–phase map, and nascent delta families.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numerics::{integrate, integrate_pieces, QuadratureSpec};

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveKind {
    /// `ψ = e^{i k n̂·r}` with unit direction `n̂`.
    Plane { direction: Vec3 },
    /// Outgoing `ψ = e^{ikr}/r`.
    Spherical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpec {
    pub kind: WaveKind,
    pub k: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl WaveSpec {
    pub fn plane(direction: Vec3, k: f64) -> Result<Self> {
        let n = norm(&direction);
        if !(n > 0.0) {
            return domain("plane-wave direction must be nonzero");
        }
        Self::new(
            WaveKind::Plane {
                direction: direction.map(|c| c / n),
            },
            k,
            1.0,
            1.0,
        )
    }

    pub fn spherical(k: f64) -> Result<Self> {
        Self::new(WaveKind::Spherical, k, 1.0, 1.0)
    }

    pub fn new(kind: WaveKind, k: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !(k >= 0.0 && mass > 0.0 && hbar > 0.0) {
            return domain("need k >= 0, mass > 0, hbar > 0");
        }
        Ok(Self { kind, k, mass, hbar })
    }

    pub fn wavefunction(&self, r: &Vec3) -> Complex64 {
        match self.kind {
            WaveKind::Plane { direction } => Complex64::from_polar(1.0, self.k * dot(&direction, r)),
            WaveKind::Spherical => {
                let rr = norm(r);
                Complex64::from_polar(1.0 / rr, self.k * rr)
            }
        }
    }
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Closed-form flux density: `ħk n̂/m` for the plane wave and
/// `(ħk/m) r̂/r²` for the spherical wave.
pub fn flux_analytic(w: &WaveSpec, point: &Vec3) -> Result<Vec3> {
    let c = w.hbar * w.k / w.mass;
    match w.kind {
        WaveKind::Plane { direction } => Ok(direction.map(|d| c * d)),
        WaveKind::Spherical => {
            let r = norm(point);
            if r == 0.0 {
                return Err(Error::SingularPoint("spherical-wave flux at the origin".into()));
            }
            Ok(point.map(|x| c * x / (r * r * r)))
        }
    }
}

/// `j = (ħ/m) Im(ψ* ∇ψ)` with `∇ψ` from central differences of step `h`.
pub fn flux_finite_difference(w: &WaveSpec, point: &Vec3, h: f64) -> Result<Vec3> {
    if matches!(w.kind, WaveKind::Spherical) && norm(point) <= 2.0 * h {
        return Err(Error::SingularPoint("stencil reaches the origin".into()));
    }
    let psi = w.wavefunction(point);
    let mut j = [0.0; 3];
    for (axis, out) in j.iter_mut().enumerate() {
        let mut plus = *point;
        let mut minus = *point;
        plus[axis] += h;
        minus[axis] -= h;
        let grad = (w.wavefunction(&plus) - w.wavefunction(&minus)) / (2.0 * h);
        *out = w.hbar / w.mass * (psi.conj() * grad).im;
    }
    Ok(j)
}

/// `∮ j·dS` over the sphere of radius `r` about the origin.
pub fn sphere_flux(w: &WaveSpec, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain("sphere radius must be positive");
    }
    let spec = QuadratureSpec::tight();
    let mut err = None;
    let total = integrate(
        |theta| {
            let (st, ct) = theta.sin_cos();
            integrate(
                |phi| {
                    let n = [st * phi.cos(), st * phi.sin(), ct];
                    match flux_analytic(w, &n.map(|c| r * c)) {
                        Ok(j) => dot(&j, &n) * r * r * st,
                        Err(e) => {
                            err.get_or_insert(e);
                            0.0
                        }
                    }
                },
                0.0,
                2.0 * PI,
                &spec,
            )
            .unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            })
        },
        0.0,
        PI,
        &spec,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Net outward flux through the surface of the cube `[−L, L]³`.
pub fn box_flux(w: &WaveSpec, half_width: f64) -> Result<f64> {
    let spec = QuadratureSpec::tight();
    let l = half_width;
    let mut total = 0.0;
    for axis in 0..3 {
        for sign in [-1.0, 1.0] {
            let (u_ax, v_ax) = ((axis + 1) % 3, (axis + 2) % 3);
            let face = integrate(
                |u| {
                    integrate(
                        |v| {
                            let mut p = [0.0; 3];
                            p[axis] = sign * l;
                            p[u_ax] = u;
                            p[v_ax] = v;
                            flux_analytic(w, &p).map(|j| sign * j[axis]).unwrap_or(f64::NAN)
                        },
                        -l,
                        l,
                        &spec,
                    )
                    .unwrap_or(f64::NAN)
                },
                -l,
                l,
                &spec,
            )?;
            total += face;
        }
    }
    if total.is_nan() {
        return Err(Error::SingularPoint("flux undefined on the box surface".into()));
    }
    Ok(total)
}

/// Rectangle `[0,a]×[0,b]` with `ψ(x,0) = e^{iφ₁}ψ(x,b)` and
/// `ψ(0,y) = e^{iφ₂}ψ(a,y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusSpec {
    pub a: f64,
    pub b: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl TorusSpec {
    pub fn new(a: f64, b: f64, phi1: f64, phi2: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return domain("torus sides must be positive");
        }
        Ok(Self {
            a,
            b,
            phi1,
            phi2,
            mass: 1.0,
            hbar: 1.0,
        })
    }

    /// `(k_x, k_y)` of mode `(n₁, n₂)`.
    pub fn wavenumbers(&self, n1: i64, n2: i64) -> (f64, f64) {
        (
            (-self.phi2 + 2.0 * PI * n2 as f64) / self.a,
            (-self.phi1 + 2.0 * PI * n1 as f64) / self.b,
        )
    }

    fn energy_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

pub fn torus_eigenvalue(t: &TorusSpec, n1: i64, n2: i64) -> f64 {
    let (kx, ky) = t.wavenumbers(n1, n2);
    t.energy_scale() * (kx * kx + ky * ky)
}

pub fn torus_mode(t: &TorusSpec, n1: i64, n2: i64, x: f64, y: f64) -> Complex64 {
    let (kx, ky) = t.wavenumbers(n1, n2);
    Complex64::from_polar(1.0, kx * x + ky * y)
}

/// Largest boundary-condition residual of mode `(n₁, n₂)` over `samples`
/// points along each cut.
pub fn torus_boundary_residual(t: &TorusSpec, n1: i64, n2: i64, samples: usize) -> f64 {
    let e1 = Complex64::from_polar(1.0, t.phi1);
    let e2 = Complex64::from_polar(1.0, t.phi2);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let s = (i as f64 + 0.5) / samples as f64;
        let x = s * t.a;
        let y = s * t.b;
        worst = worst.max((torus_mode(t, n1, n2, x, 0.0) - e1 * torus_mode(t, n1, n2, x, t.b)).norm());
        worst = worst.max((torus_mode(t, n1, n2, 0.0, y) - e2 * torus_mode(t, n1, n2, t.a, y)).norm());
    }
    worst
}

/// Riemann-sum inner product of two modes on an `n × n` grid.
pub fn torus_inner_product(t: &TorusSpec, m: (i64, i64), n: (i64, i64), grid: usize) -> Complex64 {
    let (dx, dy) = (t.a / grid as f64, t.b / grid as f64);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..grid {
        for j in 0..grid {
            let (x, y) = (i as f64 * dx, j as f64 * dy);
            acc += torus_mode(t, m.0, m.1, x, y).conj() * torus_mode(t, n.0, n.1, x, y);
        }
    }
    acc * dx * dy
}

/// All analytic levels with `|n₁|, |n₂| ≤ n_max`, ascending.
pub fn torus_levels(t: &TorusSpec, n_max: i64) -> Vec<f64> {
    let mut v: Vec<f64> = (-n_max..=n_max)
        .flat_map(|n1| (-n_max..=n_max).map(move |n2| (n1, n2)))
        .map(|(n1, n2)| torus_eigenvalue(t, n1, n2))
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `−d²/dx²` on `n` nodes of a ring of length `len` whose wrap-around link
/// carries the phase `ψ_n = e^{−iφ} ψ_0`.
pub fn twisted_laplacian_1d(n: usize, len: f64, phi: f64) -> DMatrix<Complex64> {
    let h = len / n as f64;
    let inv = 1.0 / (h * h);
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        m[(i, i)] += Complex64::new(2.0 * inv, 0.0);
        let (next, w) = if i + 1 == n { (0, Complex64::from_polar(inv, -phi)) } else { (i + 1, Complex64::new(inv, 0.0)) };
        m[(i, next)] -= w;
        m[(next, i)] -= w.conj();
    }
    m
}

fn sorted_real_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Lowest `count` eigenvalues of the five-point twisted Laplacian on an
/// `nx × ny` grid, scaled by `ħ²/2m`. The operator is a Kronecker sum, so
/// the 2-D spectrum is assembled from the two 1-D spectra.
pub fn fd_torus_spectrum(t: &TorusSpec, nx: usize, ny: usize, count: usize) -> Result<Vec<f64>> {
    if nx < 3 || ny < 3 {
        return domain("finite-difference torus needs at least 3 nodes per side");
    }
    let ex = sorted_real_eigenvalues(twisted_laplacian_1d(nx, t.a, t.phi2));
    let ey = sorted_real_eigenvalues(twisted_laplacian_1d(ny, t.b, t.phi1));
    let mut sums: Vec<f64> = ex
        .iter()
        .take(count + 1)
        .flat_map(|x| ey.iter().take(count + 1).map(move |y| x + y))
        .collect();
    sums.sort_by(f64::total_cmp);
    sums.truncate(count);
    Ok(sums.into_iter().map(|e| t.energy_scale() * e).collect())
}

/// Lowest `count` eigenvalues of the full `(nx·ny)²` five-point operator,
/// for small grids.
pub fn fd_torus_spectrum_dense(t: &TorusSpec, nx: usize, ny: usize, count: usize) -> Result<Vec<f64>> {
    if nx < 3 || ny < 3 {
        return domain("finite-difference torus needs at least 3 nodes per side");
    }
    let (hx, hy) = (t.a / nx as f64, t.b / ny as f64);
    let n = nx * ny;
    let idx = |i: usize, j: usize| i * ny + j;
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..nx {
        for j in 0..ny {
            let p = idx(i, j);
            m[(p, p)] += Complex64::new(2.0 / (hx * hx) + 2.0 / (hy * hy), 0.0);
            let (ni, wx) = if i + 1 == nx {
                (0, Complex64::from_polar(1.0 / (hx * hx), -t.phi2))
            } else {
                (i + 1, Complex64::new(1.0 / (hx * hx), 0.0))
            };
            let q = idx(ni, j);
            m[(p, q)] -= wx;
            m[(q, p)] -= wx.conj();
            let (nj, wy) = if j + 1 == ny {
                (0, Complex64::from_polar(1.0 / (hy * hy), -t.phi1))
            } else {
                (j + 1, Complex64::new(1.0 / (hy * hy), 0.0))
            };
            let q = idx(i, nj);
            m[(p, q)] -= wy;
            m[(q, p)] -= wy.conj();
        }
    }
    let mut ev = sorted_real_eigenvalues(m);
    ev.truncate(count);
    Ok(ev.into_iter().map(|e| t.energy_scale() * e).collect())
}

/// Largest deviation of the lowest `count` finite-difference levels from
/// the analytic ones on an `n × n` grid.
pub fn fd_torus_error(t: &TorusSpec, n: usize, count: usize) -> Result<f64> {
    let fd = fd_torus_spectrum(t, n, n, count)?;
    let exact = torus_levels(t, 6);
    Ok(fd.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxPhase {
    /// `(ħc/e) φ`.
    pub flux: f64,
    /// `Φ₀ φ / π` with `Φ₀ = πħc/e`.
    pub flux_from_quantum: f64,
    pub flux_quantum: f64,
}

/// Magnetic flux through cut `which` (1 or 2) implied by its phase lag.
pub fn flux_phase_map(t: &TorusSpec, which: u8, e: f64, c: f64) -> Result<FluxPhase> {
    if e == 0.0 {
        return domain("charge must be nonzero");
    }
    let phi = match which {
        1 => t.phi1,
        2 => t.phi2,
        _ => return domain(format!("cut index must be 1 or 2, got {which}")),
    };
    let quantum = PI * t.hbar * c / e;
    Ok(FluxPhase {
        flux: t.hbar * c / e * phi,
        flux_from_quantum: quantum * phi / PI,
        flux_quantum: quantum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NascentForm {
    /// `(a/π)/(a² + x²)`.
    Lorentz1d,
    /// `(2/π) a x²/(a² + x²)²`.
    LorentzSqX21d,
    /// `2a³/(π (a² + x²)²)`.
    LorentzCube1d,
    /// `a/(π² (a² + p²)²)` in three dimensions.
    LorentzSq3d,
    /// `8πa/(p² + a²)²` divided by `(2π)³`, the Coulomb ground state in
    /// momentum space normalised to `|φ_c(0)| = 1` with `a = αμ`.
    CoulombMomentum,
}

impl NascentForm {
    pub const ALL: [NascentForm; 5] = [
        NascentForm::Lorentz1d,
        NascentForm::LorentzSqX21d,
        NascentForm::LorentzCube1d,
        NascentForm::LorentzSq3d,
        NascentForm::CoulombMomentum,
    ];

    pub fn is_radial(&self) -> bool {
        matches!(self, NascentForm::LorentzSq3d | NascentForm::CoulombMomentum)
    }

    pub fn name(&self) -> &'static str {
        match self {
            NascentForm::Lorentz1d => "lorentz_1d",
            NascentForm::LorentzSqX21d => "lorentz_sq_x2_1d",
            NascentForm::LorentzCube1d => "lorentz_cube_1d",
            NascentForm::LorentzSq3d => "lorentz_sq_3d",
            NascentForm::CoulombMomentum => "coulomb_momentum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NascentFamily {
    pub form: NascentForm,
    pub a: f64,
}

impl NascentFamily {
    pub fn new(form: NascentForm, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return domain("nascent width must be positive");
        }
        Ok(Self { form, a })
    }

    pub fn density(&self, x: f64) -> f64 {
        let a = self.a;
        let d = a * a + x * x;
        match self.form {
            NascentForm::Lorentz1d => a / (PI * d),
            NascentForm::LorentzSqX21d => 2.0 / PI * a * x * x / (d * d),
            NascentForm::LorentzCube1d => 2.0 * a.powi(3) / (PI * d * d),
            NascentForm::LorentzSq3d => a / (PI * PI * d * d),
            NascentForm::CoulombMomentum => 8.0 * PI * a / (d * d) / (2.0 * PI).powi(3),
        }
    }
}

/// Smooth compactly supported test functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    /// `exp(−1/(1 − (x/L)²))` on `|x| < L`.
    Bump { l: f64 },
    /// `bump(x/L)·(1 + x + cos x)`.
    ModulatedBump { l: f64 },
    /// `e^{−x²}·bump(x/L)`.
    GaussianCutoff { l: f64 },
}

impl TestFunction {
    pub fn support(&self) -> f64 {
        match *self {
            TestFunction::Bump { l } | TestFunction::ModulatedBump { l } | TestFunction::GaussianCutoff { l } => l,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let bump = |u: f64| if u.abs() < 1.0 { (-1.0 / (1.0 - u * u)).exp() } else { 0.0 };
        match *self {
            TestFunction::Bump { l } => bump(x / l),
            TestFunction::ModulatedBump { l } => bump(x / l) * (1.0 + x + x.cos()),
            TestFunction::GaussianCutoff { l } => (-x * x).exp() * bump(x / l),
        }
    }
}

/// `⟨δ_a, φ⟩` by quadrature; radial families integrate `4πp² δ_a(p) Φ(p)`.
pub fn nascent_pairing(f: &NascentFamily, test: &TestFunction) -> Result<f64> {
    let l = test.support();
    let a = f.a;
    let spec = QuadratureSpec::tight();
    if f.form.is_radial() {
        let mut pts = vec![0.0];
        pts.extend([a, 10.0 * a].into_iter().filter(|&p| p < l));
        pts.push(l);
        integrate_pieces(|p| 4.0 * PI * p * p * f.density(p) * test.eval(p), &pts, &spec)
    } else {
        let mut pts = vec![-l];
        for p in [-10.0 * a, -a, 0.0, a, 10.0 * a] {
            if p > -l && p < l {
                pts.push(p);
            }
        }
        pts.push(l);
        integrate_pieces(|x| f.density(x) * test.eval(x), &pts, &spec)
    }
}

/// `(2π)^{−3} ∫ φ_c(p) Φ(p) d³p` with
/// `φ_c(p) = 8π αμ |φ_c(0)| / (p² + α²μ²)²`.
pub fn coulomb_momentum_limit(alpha_mu: f64, phi_c0: f64, test: &TestFunction) -> Result<f64> {
    let fam = NascentFamily::new(NascentForm::CoulombMomentum, alpha_mu)?;
    Ok(phi_c0 * nascent_pairing(&fam, test)?)
}
