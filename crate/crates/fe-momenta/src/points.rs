use crate::{MomentaError, MomentumConfig, Vec4};
use nalgebra::{DMatrix, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Attempts before `coplanar_point` gives up on its rejection sampling.
const COPLANAR_TRIES: usize = 10_000;

/// Fully symmetric configuration: every tail momentum has length `M` and all
/// pairwise dots equal `-M^2/(n-1)`, which forces `|p_0| = M` and pins every
/// subset sum at `|sum| >= M`, i.e. `eta = M` on the nose. Needs `n <= 5`
/// since the tail must fit into four dimensions.
pub fn symmetric_point(n: usize, scale: f64, seed: u64) -> Result<MomentumConfig, MomentaError> {
    if !(2..=5).contains(&n) {
        return Err(MomentaError::SymmetricUnsupported(n));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(MomentaError::BadScale(scale));
    }
    let k = n - 1;
    let g = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            scale * scale
        } else {
            -scale * scale / k as f64
        }
    });
    let chol = g
        .cholesky()
        .expect("pairwise-dot matrix is positive definite");
    let l = chol.l();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rot = seeded_rotation(&mut rng);
    let tail: Vec<Vec4> = (0..k)
        .map(|i| {
            let mut v = [0.0; 4];
            for (j, slot) in v.iter_mut().enumerate().take(i + 1) {
                *slot = l[(i, j)];
            }
            apply(&rot, Vec4(v))
        })
        .collect();
    MomentumConfig::from_tail(scale, tail)
}

/// Configuration whose momenta span exactly a plane while staying away from
/// exceptionality: tail momenta are sampled on an annulus `[0.85, 1] * M`
/// inside a seeded plane and rejected until `eta > margin * M` and the span
/// test passes.
pub fn coplanar_point(
    n: usize,
    scale: f64,
    margin: f64,
    seed: u64,
) -> Result<MomentumConfig, MomentaError> {
    if !(3..=crate::MAX_MOMENTA).contains(&n) {
        return Err(MomentaError::CoplanarUnsupported(n));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(MomentaError::BadScale(scale));
    }
    if !(0.0..1.0).contains(&margin) {
        return Err(MomentaError::BadMargin(margin));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rot = seeded_rotation(&mut rng);
    let e1 = column(&rot, 0);
    let e2 = column(&rot, 1);
    for _ in 0..COPLANAR_TRIES {
        let tail: Vec<Vec4> = (1..n)
            .map(|_| {
                let r = scale * rng.gen_range(0.85..=1.0);
                let th = rng.gen_range(0.0..std::f64::consts::TAU);
                e1 * (r * th.cos()) + e2 * (r * th.sin())
            })
            .collect();
        let cfg = MomentumConfig::from_tail(scale, tail)?;
        if cfg.eta()? <= margin * scale {
            continue;
        }
        if plane_rank_is_two(&cfg) {
            return Ok(cfg);
        }
    }
    Err(MomentaError::RetriesExhausted {
        tries: COPLANAR_TRIES,
        margin,
    })
}

/// True when the momenta span exactly two dimensions: relative to the top
/// singular value of the 4 x n momentum matrix, the second one is above
/// `1e-10` and everything below is under it.
pub fn plane_rank_is_two(cfg: &MomentumConfig) -> bool {
    let m = DMatrix::from_fn(4, cfg.p.len(), |i, j| cfg.p[j][i]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv[0];
    if !(top > 0.0) {
        return false;
    }
    sv.len() >= 2 && sv[1] > 1e-10 * top && sv.iter().skip(2).all(|&s| s <= 1e-10 * top)
}

/// Seeded orthogonal matrix in row-major layout, for rotation-invariance
/// tests elsewhere in the workspace.
pub fn seeded_rotation4(seed: u64) -> [[f64; 4]; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = seeded_rotation(&mut rng);
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = q[(i, j)];
        }
    }
    out
}

/// Haar-ish orthogonal frame from a seeded generator: QR of a random matrix,
/// with column signs pinned by the R diagonal so a seed determines the frame.
fn seeded_rotation(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    loop {
        let raw = Matrix4::from_fn(|_, _| rng.gen_range(-1.0f64..1.0));
        let (mut q, r) = raw.qr().unpack();
        if (0..4).any(|i| r[(i, i)].abs() < 1e-6) {
            continue;
        }
        for j in 0..4 {
            if r[(j, j)] < 0.0 {
                for i in 0..4 {
                    q[(i, j)] = -q[(i, j)];
                }
            }
        }
        return q;
    }
}

fn apply(m: &Matrix4<f64>, v: Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = (0..4).map(|j| m[(i, j)] * v[j]).sum();
    }
    Vec4(out)
}

fn column(m: &Matrix4<f64>, j: usize) -> Vec4 {
    Vec4([m[(0, j)], m[(1, j)], m[(2, j)], m[(3, j)]])
}
