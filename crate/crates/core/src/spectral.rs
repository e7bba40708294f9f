//! Weighted Laplacian eigenproblem: the Dirichlet form ∫ u'v' h dx against
//! the mass form ∫ u v h dx, discretized with conforming piecewise-linear
//! elements and solved as a generalized symmetric-definite pencil.
//!
//! No essential boundary condition is imposed on intervals - the natural
//! (Neumann-type) realization is the one induced by the form domain, which
//! also covers endpoint-vanishing densities. Circles assemble periodically.
//!
//! Eigenvalues are extracted by Sturm-sequence bisection: the negative count
//! of the LDL^T factorization of K - lambda*M equals the number of pencil
//! eigenvalues below lambda (Sylvester inertia), and the matrices are
//! tridiagonal (plus a periodic corner), so each count costs O(n).

use crate::error::{Error, Result};
use crate::geometry::ModelSpace;
use crate::quad::GaussLegendre;
use crate::special::erfc;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

pub const DEFAULT_QUADRATURE_ORDER: usize = 8;
pub const DEFAULT_GRADING_STRENGTH: f64 = 1.5;
/// resolved_count keeps eigenvalues below this fraction of the mesh Nyquist
/// estimate (pi / h_max)^2.
pub const RESOLVED_SAFETY: f64 = 1.0 / 16.0;
const ELEMENT_MASS_FLOOR: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Grading {
    Uniform,
    BoundaryGraded { strength: f64 },
}

/// Mesh plus element quadrature order. Nodes are strictly increasing; on
/// circles the mesh covers [0, circumference) and wraps.
#[derive(Clone, Debug)]
pub struct Discretization {
    mesh: Vec<f64>,
    quadrature_order: usize,
    grading: Grading,
    circle: bool,
    extent: f64,
}

impl Discretization {
    pub fn uniform(space: &ModelSpace, elements: usize, quadrature_order: usize) -> Result<Self> {
        let extent = space.extent();
        let circle = space.is_circle();
        let nodes_needed = if circle { elements } else { elements + 1 };
        if nodes_needed < 8 {
            return Err(Error::InvalidParameter(format!(
                "mesh needs at least 8 nodes, got {nodes_needed}"
            )));
        }
        let mesh: Vec<f64> = if circle {
            (0..elements)
                .map(|i| extent * (i as f64 / elements as f64))
                .collect()
        } else {
            (0..=elements)
                .map(|i| extent * (i as f64 / elements as f64))
                .collect()
        };
        Ok(Discretization {
            mesh,
            quadrature_order: quadrature_order.max(2),
            grading: Grading::Uniform,
            circle,
            extent,
        })
    }

    /// Power-law clustering toward both interval endpoints; the element-size
    /// ratio next to the boundary is about 2^strength - 1, i.e. locally
    /// geometric.
    pub fn boundary_graded(
        space: &ModelSpace,
        elements: usize,
        strength: f64,
        quadrature_order: usize,
    ) -> Result<Self> {
        if space.is_circle() {
            return Err(Error::InvalidParameter(
                "boundary grading applies to intervals".into(),
            ));
        }
        if !(strength >= 1.0) || !strength.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grading strength must be >= 1, got {strength}"
            )));
        }
        if elements + 1 < 8 {
            return Err(Error::InvalidParameter(format!(
                "mesh needs at least 8 nodes, got {}",
                elements + 1
            )));
        }
        let extent = space.extent();
        let map = |xi: f64| -> f64 {
            if xi <= 0.5 {
                0.5 * (2.0 * xi).powf(strength)
            } else {
                1.0 - 0.5 * (2.0 * (1.0 - xi)).powf(strength)
            }
        };
        let mesh: Vec<f64> = (0..=elements)
            .map(|i| extent * map(i as f64 / elements as f64))
            .collect();
        Ok(Discretization {
            mesh,
            quadrature_order: quadrature_order.max(2),
            grading: Grading::BoundaryGraded { strength },
            circle: false,
            extent,
        })
    }

    /// Wrap an explicit mesh. Accepts small meshes so assembled matrices can
    /// be inspected directly; `eigen_solve` itself enforces the production
    /// minimum of 8 nodes.
    pub fn from_mesh(space: &ModelSpace, mesh: Vec<f64>, quadrature_order: usize) -> Result<Self> {
        let extent = space.extent();
        let circle = space.is_circle();
        if mesh.len() < 2 || mesh.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "mesh must be strictly increasing with at least 2 nodes".into(),
            ));
        }
        let lo_ok = mesh[0].abs() <= 1e-12 * extent;
        let hi = mesh[mesh.len() - 1];
        let hi_ok = if circle {
            hi < extent
        } else {
            (hi - extent).abs() <= 1e-12 * extent
        };
        if !lo_ok || !hi_ok {
            return Err(Error::InvalidParameter(format!(
                "mesh [{}, {hi}] does not span the space [0, {extent}]",
                mesh[0]
            )));
        }
        Ok(Discretization {
            mesh,
            quadrature_order: quadrature_order.max(2),
            grading: Grading::Uniform,
            circle,
            extent,
        })
    }

    pub fn mesh(&self) -> &[f64] {
        &self.mesh
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature_order
    }

    pub fn is_circle(&self) -> bool {
        self.circle
    }

    fn element_count(&self) -> usize {
        if self.circle {
            self.mesh.len()
        } else {
            self.mesh.len() - 1
        }
    }

    /// Element endpoints (left, right) in unwrapped coordinates.
    fn element(&self, e: usize) -> (f64, f64) {
        if self.circle && e == self.mesh.len() - 1 {
            (self.mesh[e], self.extent + self.mesh[0])
        } else {
            (self.mesh[e], self.mesh[e + 1])
        }
    }

    pub fn max_element_size(&self) -> f64 {
        (0..self.element_count())
            .map(|e| {
                let (a, b) = self.element(e);
                b - a
            })
            .fold(0.0, f64::max)
    }

    /// Stable digest of the mesh and quadrature order (cache keying).
    pub fn signature(&self) -> String {
        let mut h = Sha256::new();
        h.update([self.circle as u8]);
        h.update((self.quadrature_order as u64).to_le_bytes());
        for &x in &self.mesh {
            h.update(x.to_le_bytes());
        }
        let d = h.finalize();
        d.iter().take(12).map(|b| format!("{b:02x}")).collect()
    }
}

/// Symmetric tridiagonal matrix with an optional periodic corner entry
/// coupling the first and last unknowns.
#[derive(Clone, Debug)]
pub struct BandMatrix {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub corner: Option<f64>,
}

impl BandMatrix {
    fn zeros(n: usize, periodic: bool) -> Self {
        BandMatrix {
            diag: vec![0.0; n],
            off: vec![0.0; n.saturating_sub(1)],
            corner: if periodic { Some(0.0) } else { None },
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Row sums (constants-in-kernel diagnostics).
    pub fn row_sums(&self) -> Vec<f64> {
        let n = self.dim();
        let mut sums = self.diag.clone();
        for i in 0..n - 1 {
            sums[i] += self.off[i];
            sums[i + 1] += self.off[i];
        }
        if let Some(c) = self.corner {
            sums[0] += c;
            sums[n - 1] += c;
        }
        sums
    }

    /// x^T A x for the quadratic form.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            acc += self.diag[i] * x[i] * x[i];
        }
        for i in 0..n - 1 {
            acc += 2.0 * self.off[i] * x[i] * x[i + 1];
        }
        if let Some(c) = self.corner {
            acc += 2.0 * c * x[0] * x[n - 1];
        }
        acc
    }
}

/// Assemble the stiffness and mass matrices of the weighted form pair over
/// piecewise-linear elements:
///   stiffness[i][j] = ∫ phi_i' phi_j' h dx,  mass[i][j] = ∫ phi_i phi_j h dx.
pub fn assemble(space: &ModelSpace, disc: &Discretization) -> Result<(BandMatrix, BandMatrix)> {
    let n = disc.mesh.len();
    let periodic = disc.circle;
    let mut stiffness = BandMatrix::zeros(n, periodic);
    let mut mass = BandMatrix::zeros(n, periodic);
    let rule = GaussLegendre::new(disc.quadrature_order);

    for e in 0..disc.element_count() {
        let (xl, xr) = disc.element(e);
        let len = xr - xl;
        let mut ih = 0.0;
        let mut mll = 0.0;
        let mut mlr = 0.0;
        let mut mrr = 0.0;
        // map the rule manually so the basis values come for free
        let mid = 0.5 * (xl + xr);
        let half = 0.5 * len;
        for q in 0..rule.len() {
            let (xi, w) = rule.node_weight(q);
            let x = mid + half * xi;
            let h = space.density_at(x);
            let pl = (xr - x) / len;
            let pr = (x - xl) / len;
            let wh = w * half * h;
            ih += wh;
            mll += wh * pl * pl;
            mlr += wh * pl * pr;
            mrr += wh * pr * pr;
        }
        if !(ih > 0.0) || !ih.is_finite() {
            return Err(Error::SingularMass { element: e });
        }
        let s = ih / (len * len);
        let (i, j) = if periodic && e == n - 1 {
            (n - 1, 0)
        } else {
            (e, e + 1)
        };
        stiffness.diag[i] += s;
        stiffness.diag[j] += s;
        mass.diag[i] += mll;
        mass.diag[j] += mrr;
        if periodic && e == n - 1 {
            *stiffness.corner.as_mut().unwrap() -= s;
            *mass.corner.as_mut().unwrap() += mlr;
        } else {
            stiffness.off[e] -= s;
            mass.off[e] += mlr;
        }
    }
    Ok((stiffness, mass))
}

/// Number of pencil eigenvalues of (K, M) strictly below `lambda`
/// (LDL^T inertia count; the periodic corner is handled by a bordered
/// factorization whose Schur complement supplies the last pivot).
pub fn eigenvalue_count_below(k: &BandMatrix, m: &BandMatrix, lambda: f64) -> usize {
    const PIVMIN: f64 = 1e-300;
    let n = k.dim();
    let a = |i: usize| k.diag[i] - lambda * m.diag[i];
    let e = |i: usize| k.off[i] - lambda * m.off[i];
    match (k.corner, m.corner) {
        (None, None) => {
            let mut count = 0;
            let mut d = a(0);
            if d == 0.0 {
                d = -PIVMIN;
            }
            if d < 0.0 {
                count += 1;
            }
            for i in 1..n {
                let ei = e(i - 1);
                let mut di = a(i) - ei * ei / d;
                if di == 0.0 {
                    di = -PIVMIN;
                }
                if di < 0.0 {
                    count += 1;
                }
                d = di;
            }
            count
        }
        (Some(ck), Some(cm)) => {
            // leading (n-1) x (n-1) tridiagonal T plus border column
            // u = (corner, 0, ..., 0, off[n-2]), beta = a(n-1)
            let c = ck - lambda * cm;
            let mut count = 0;
            let mut d = a(0);
            if d == 0.0 {
                d = -PIVMIN;
            }
            if d < 0.0 {
                count += 1;
            }
            let mut z = c;
            let mut schur = a(n - 1) - z * z / d;
            for i in 1..n - 1 {
                let ei = e(i - 1);
                let l = ei / d;
                let mut di = a(i) - ei * l;
                if di == 0.0 {
                    di = -PIVMIN;
                }
                if di < 0.0 {
                    count += 1;
                }
                let ui = if i == n - 2 { e(n - 2) } else { 0.0 };
                z = ui - l * z;
                schur -= z * z / di;
                d = di;
            }
            if schur < 0.0 {
                count += 1;
            }
            count
        }
        _ => unreachable!("stiffness and mass share the periodic structure"),
    }
}

fn bisect_index(k: &BandMatrix, m: &BandMatrix, idx: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..160 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eigenvalue_count_below(k, m, mid) > idx {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * lo.abs().max(hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Computed eigenvalues with discretization metadata. Values beyond
/// `resolved_count` are retained only for diagnostics (the CSV export flags
/// them); every quantitative operation consumes the resolved prefix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    resolved_count: usize,
    mesh_size: f64,
    space_fingerprint: String,
    hausdorff_length: f64,
}

impl Spectrum {
    /// Wrap an externally produced eigenvalue list (synthetic spectra, cache
    /// loads). Values must be sorted and nonnegative.
    pub fn from_raw(
        eigenvalues: Vec<f64>,
        resolved_count: usize,
        mesh_size: f64,
        space_fingerprint: String,
        hausdorff_length: f64,
    ) -> Result<Self> {
        if eigenvalues.is_empty() || resolved_count == 0 || resolved_count > eigenvalues.len() {
            return Err(Error::InvalidParameter(
                "spectrum needs 1 <= resolved_count <= eigenvalue count".into(),
            ));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) || eigenvalues[0] < 0.0 {
            return Err(Error::InvalidParameter(
                "eigenvalues must be sorted and nonnegative".into(),
            ));
        }
        Ok(Spectrum {
            eigenvalues,
            resolved_count,
            mesh_size,
            space_fingerprint,
            hausdorff_length,
        })
    }

    pub fn resolved(&self) -> &[f64] {
        &self.eigenvalues[..self.resolved_count]
    }

    pub fn resolved_count(&self) -> usize {
        self.resolved_count
    }

    pub fn computed_count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_resolved_max(&self) -> f64 {
        self.eigenvalues[self.resolved_count - 1]
    }

    pub fn mesh_size(&self) -> f64 {
        self.mesh_size
    }

    pub fn space_fingerprint(&self) -> &str {
        &self.space_fingerprint
    }

    pub fn hausdorff_length(&self) -> f64 {
        self.hausdorff_length
    }

    /// (index, eigenvalue, resolved) rows for exports.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64, bool)> + '_ {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i, v, i < self.resolved_count))
    }
}

/// Solve for the lowest `count_requested` eigenvalues of the weighted pair.
pub fn eigen_solve(
    space: &ModelSpace,
    disc: &Discretization,
    count_requested: usize,
) -> Result<Spectrum> {
    if count_requested == 0 {
        return Err(Error::InvalidParameter(
            "at least one eigenvalue must be requested".into(),
        ));
    }
    if disc.mesh.len() < 8 {
        return Err(Error::InvalidParameter(format!(
            "mesh needs at least 8 nodes, got {}",
            disc.mesh.len()
        )));
    }
    let disc = sanitize_mesh(space, disc)?;
    let (k, m) = assemble(space, &disc)?;
    let n = k.dim();
    let nev = count_requested.min(n);

    // scale-invariant initial bracket, grown until it encloses nev values
    let sk: f64 = k.diag.iter().sum();
    let sm: f64 = m.diag.iter().sum();
    let mut hi = 4.0 * (sk / sm).abs().max(1.0);
    let mut grow = 0;
    while eigenvalue_count_below(&k, &m, hi) < nev {
        hi *= 4.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::SolverFailure(
                "upper spectral bracket did not enclose the requested count".into(),
            ));
        }
    }
    let mut lo = -1e-6 * hi;
    let mut widen = 0;
    while eigenvalue_count_below(&k, &m, lo) != 0 {
        lo *= 4.0;
        widen += 1;
        if widen > 100 {
            return Err(Error::SolverFailure(
                "mass matrix is not positive definite".into(),
            ));
        }
    }

    let mut eigenvalues: Vec<f64> = (0..nev)
        .into_par_iter()
        .map(|idx| bisect_index(&k, &m, idx, lo, hi))
        .collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for v in eigenvalues.iter_mut() {
        if *v < 0.0 {
            if *v < -1e-8 {
                return Err(Error::SolverFailure(format!(
                    "negative eigenvalue {v} from a positive semidefinite form"
                )));
            }
            *v = 0.0;
        }
    }

    let mesh_size = disc.max_element_size();
    let threshold = RESOLVED_SAFETY * (std::f64::consts::PI / mesh_size).powi(2);
    let resolved_count = eigenvalues
        .partition_point(|&v| v <= threshold)
        .clamp(1, nev);

    Spectrum::from_raw(
        eigenvalues,
        resolved_count,
        mesh_size,
        space.fingerprint(),
        space.hausdorff_length(),
    )
}

/// Merge mesh elements whose measure underflows below
/// `ELEMENT_MASS_FLOOR * total_mass` into a neighbor (degenerate sampled
/// densities); interval endpoints always stay.
fn sanitize_mesh(space: &ModelSpace, disc: &Discretization) -> Result<Discretization> {
    let rule = GaussLegendre::new(disc.quadrature_order.max(4));
    let floor = ELEMENT_MASS_FLOOR * space.total_mass();
    let mut mesh = disc.mesh.clone();
    for _pass in 0..8 {
        let trial = Discretization {
            mesh: mesh.clone(),
            ..disc.clone()
        };
        let mut drop_node: Option<usize> = None;
        for e in 0..trial.element_count() {
            let (a, b) = trial.element(e);
            let mass = rule.integrate(|x| space.density_at(x), a, b);
            if mass < floor {
                // drop the interior node bounding this element
                let candidate = if trial.circle {
                    (e + 1) % mesh.len()
                } else if e + 2 == mesh.len() {
                    e // last element: drop its left node
                } else {
                    e + 1
                };
                if !trial.circle && (candidate == 0 || candidate == mesh.len() - 1) {
                    continue;
                }
                drop_node = Some(candidate);
                break;
            }
        }
        match drop_node {
            Some(i) if mesh.len() > 8 => {
                mesh.remove(i);
            }
            _ => break,
        }
    }
    Ok(Discretization {
        mesh,
        ..disc.clone()
    })
}

/// Counting function N(lambda) = #{i : lambda_i <= lambda} over the resolved
/// spectrum, zero mode included.
pub fn counting_function(spec: &Spectrum, lambda: f64) -> Result<usize> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "counting function needs lambda >= 0, got {lambda}"
        )));
    }
    let max = spec.lambda_resolved_max();
    if lambda > max {
        return Err(Error::BeyondResolvedRange {
            lambda,
            resolved: max,
        });
    }
    Ok(spec.resolved().partition_point(|&v| v <= lambda))
}

/// Optional continuation of the heat trace past the resolved window,
/// integrating e^{-t s} against the flat eigenvalue density
/// H^1/(2 pi sqrt(s)) from lambda_resolved upward.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailModel {
    Weyl,
}

const TAIL_RELATIVE_BUDGET: f64 = 1e-6;

/// Z(t) = sum over resolved eigenvalues of e^{-lambda t} (plus the analytic
/// tail when requested). Rejects t small enough that the unresolved tail
/// would contribute more than 1e-6 relative unless a tail model is supplied.
pub fn heat_trace(spec: &Spectrum, t: f64, tail: Option<TailModel>) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "heat trace needs t > 0, got {t}"
        )));
    }
    let sum: f64 = spec.resolved().iter().map(|&l| (-l * t).exp()).sum();
    let tail_estimate = weyl_tail(spec, t);
    match tail {
        Some(TailModel::Weyl) => Ok(sum + tail_estimate),
        None => {
            if tail_estimate > TAIL_RELATIVE_BUDGET * sum {
                Err(Error::UnresolvedTail {
                    t,
                    estimate: tail_estimate / sum,
                })
            } else {
                Ok(sum)
            }
        }
    }
}

/// (H1/pi) ∫_{lambda_res}^inf e^{-t s} / (2 sqrt(s)) ds
///   = (H1/pi) * sqrt(pi/t)/2 * erfc(sqrt(t * lambda_res)).
fn weyl_tail(spec: &Spectrum, t: f64) -> f64 {
    let lr = spec.lambda_resolved_max();
    let h1 = spec.hausdorff_length();
    (h1 / std::f64::consts::PI)
        * 0.5
        * (std::f64::consts::PI / t).sqrt()
        * erfc((t * lr).sqrt())
}

pub mod cache {
    //! Versioned binary cache of spectra: fixed header followed by the
    //! 64-bit float eigenvalue array, keyed by space fingerprint plus mesh
    //! signature.

    use super::Spectrum;
    use crate::error::{Error, Result};
    use std::io::{Read, Write};
    use std::path::{Path, PathBuf};

    const MAGIC: &[u8; 8] = b"W1DSPEC\0";
    const VERSION: u32 = 1;

    pub fn key(fingerprint: &str, mesh_signature: &str, count_requested: usize) -> String {
        format!("{fingerprint}-{mesh_signature}-{count_requested}")
    }

    fn path_for(dir: &Path, key: &str) -> PathBuf {
        dir.join(format!("{key}.spec"))
    }

    pub fn store(dir: &Path, key: &str, spec: &Spectrum) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let final_path = path_for(dir, key);
        let tmp_path = dir.join(format!(".{key}.tmp"));
        let mut buf: Vec<u8> = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&(spec.eigenvalues.len() as u64).to_le_bytes());
        buf.extend_from_slice(&(spec.resolved_count as u64).to_le_bytes());
        buf.extend_from_slice(&spec.mesh_size.to_le_bytes());
        buf.extend_from_slice(&spec.hausdorff_length.to_le_bytes());
        let fp = spec.space_fingerprint.as_bytes();
        buf.extend_from_slice(&(fp.len() as u32).to_le_bytes());
        buf.extend_from_slice(fp);
        for &v in &spec.eigenvalues {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        let mut f = std::fs::File::create(&tmp_path)?;
        f.write_all(&buf)?;
        f.sync_all()?;
        std::fs::rename(&tmp_path, &final_path)?;
        Ok(())
    }

    pub fn load(dir: &Path, key: &str) -> Result<Option<Spectrum>> {
        let path = path_for(dir, key);
        let mut data = Vec::new();
        match std::fs::File::open(&path) {
            Ok(mut f) => {
                f.read_to_end(&mut data)?;
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        }
        let fail = || Error::Io(format!("corrupt spectrum cache entry {key}"));
        if data.len() < 8 + 4 + 8 + 8 + 8 + 8 + 4 || &data[..8] != MAGIC {
            return Err(fail());
        }
        let mut at = 8usize;
        let mut take = |n: usize| -> Result<&[u8]> {
            if at + n > data.len() {
                return Err(fail());
            }
            let s = &data[at..at + n];
            at += n;
            Ok(s)
        };
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if version != VERSION {
            return Ok(None); // stale cache format, recompute
        }
        let n = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
        let resolved = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
        let mesh_size = f64::from_le_bytes(take(8)?.try_into().unwrap());
        let h1 = f64::from_le_bytes(take(8)?.try_into().unwrap());
        let fp_len = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        let fp = String::from_utf8(take(fp_len)?.to_vec()).map_err(|_| fail())?;
        let mut eigenvalues = Vec::with_capacity(n);
        for _ in 0..n {
            eigenvalues.push(f64::from_le_bytes(take(8)?.try_into().unwrap()));
        }
        Spectrum::from_raw(eigenvalues, resolved, mesh_size, fp, h1).map(Some)
    }
}
