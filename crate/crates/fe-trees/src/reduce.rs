use crate::{bounding_log_poly, QEvaluator, ThetaWeight, TreesError, WeightedTree};
use fe_momenta::{MomentumConfig, MultiIndex, Vec4};
use std::collections::BTreeMap;

/// Outcome of removing the first two legs of a plain tree: the reduced tree
/// over the remaining leaves, its derivative weights, and enough bookkeeping
/// to push individual edge weights through the surgery.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub tree: WeightedTree,
    pub w: MultiIndex,
    /// Both removed legs sat on one vertex; that vertex, its third edge, and
    /// the far vertex were removed and the far vertex's remaining edge pair
    /// fused into one.
    pub shared_vertex: bool,
    /// Original edge id to reduced (canonical) edge id; `None` for edges that
    /// vanished, one shared target for each fused pair.
    edge_map: Vec<Option<usize>>,
    splices: Vec<Splice>,
}

#[derive(Debug, Clone, Copy)]
struct Splice {
    vertex: usize,
    leg: usize,
    pair: (usize, usize),
}

#[derive(Clone, Copy)]
enum Redirect {
    Live,
    Gone,
    To(usize),
}

fn resolve(redirect: &[Redirect], mut e: usize) -> Option<usize> {
    loop {
        match redirect[e] {
            Redirect::Live => return Some(e),
            Redirect::Gone => return None,
            Redirect::To(t) => e = t,
        }
    }
}

fn other_end(ends: &[Option<(usize, usize)>], e: usize, v: usize) -> usize {
    let (a, b) = ends[e].expect("edge alive");
    if a == v {
        b
    } else {
        a
    }
}

fn incident_alive(ends: &[Option<(usize, usize)>], v: usize) -> Vec<usize> {
    (0..ends.len())
        .filter(|&e| ends[e].is_some_and(|(a, b)| a == v || b == v))
        .collect()
}

/// Deletes leaves 0 and 1 from a plain tree with at least five leaves and
/// total weight above two. When the legs sit on different vertices, each
/// vertex is spliced out (its remaining edge pair fused); when they share a
/// vertex, that vertex and its neighbor go, the neighbor's remaining pair
/// fusing. Slots 1 and 2 of `w` must be empty: slot 1 is removed and slot 2
/// becomes the new dependent leaf 0.
pub fn reduce(tree: &WeightedTree, w: &MultiIndex) -> Result<Reduction, TreesError> {
    let n = tree.leaf_count();
    if n < 5 {
        return Err(TreesError::TooFewLeaves(n));
    }
    if !tree.is_plain() {
        return Err(TreesError::NotPlain("two-leg reduction"));
    }
    if w.len() != n {
        return Err(TreesError::CountMismatch {
            what: "weight slots",
            expected: n,
            got: w.len(),
        });
    }
    for slot in [1usize, 2] {
        if w.counts()[slot] != 0 {
            return Err(TreesError::WeightedSlot(slot));
        }
    }
    let theta_total = n as u32 + u32::from(w.order()) - 4;
    if theta_total <= 2 {
        return Err(TreesError::TotalWeightTooSmall(theta_total));
    }

    let ne = tree.edge_count();
    let v = tree.leaf_neighbor(0);
    let vbar = tree.leaf_neighbor(1);
    let shared = v == vbar;

    let mut ends: Vec<Option<(usize, usize)>> =
        (0..ne).map(|e| Some(tree.endpoints(e))).collect();
    let mut redirect = vec![Redirect::Live; ne];
    let mut splices = Vec::new();
    let mut removed_vertices = vec![v];

    if shared {
        let third = incident_alive(&ends, v)
            .into_iter()
            .find(|&e| e != 0 && e != 1)
            .expect("trivalent");
        let u = other_end(&ends, third, v);
        removed_vertices.push(u);
        let pair: Vec<usize> = incident_alive(&ends, u)
            .into_iter()
            .filter(|&e| e != third)
            .collect();
        let (a, b) = (pair[0], pair[1]);
        let fused = (other_end(&ends, a, u), other_end(&ends, b, u));
        ends[a] = Some(fused);
        ends[b] = None;
        redirect[b] = Redirect::To(a);
        for gone in [third, 0, 1] {
            ends[gone] = None;
            redirect[gone] = Redirect::Gone;
        }
    } else {
        removed_vertices.push(vbar);
        for (leg, vv) in [(0usize, v), (1usize, vbar)] {
            let pair: Vec<usize> = incident_alive(&ends, vv)
                .into_iter()
                .filter(|&e| e != leg)
                .collect();
            let (a, b) = (pair[0], pair[1]);
            let fused = (other_end(&ends, a, vv), other_end(&ends, b, vv));
            ends[a] = Some(fused);
            ends[b] = None;
            redirect[b] = Redirect::To(a);
            ends[leg] = None;
            redirect[leg] = Redirect::Gone;
            splices.push(Splice {
                vertex: vv,
                leg,
                pair: (a, b),
            });
        }
    }

    let n_new = n - 2;
    let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
    let mut rank = n_new;
    for iv in tree.internal_vertices() {
        if !removed_vertices.contains(&iv) {
            vmap.insert(iv, rank);
            rank += 1;
        }
    }
    let map_vertex = |x: usize| if x < n { x - 2 } else { vmap[&x] };

    let live: Vec<usize> = (0..ne).filter(|&e| ends[e].is_some()).collect();
    let edges_in: Vec<(usize, usize)> = live
        .iter()
        .map(|&e| {
            let (a, b) = ends[e].unwrap();
            (map_vertex(a), map_vertex(b))
        })
        .collect();
    let (reduced, pos_map) = WeightedTree::new_mapped(
        tree.labels()[2..].to_vec(),
        edges_in,
        vec![n_new == 3; n_new - 2],
        vec![0; live.len()],
    )?;

    let mut canon_of_live = vec![None; ne];
    for (pos, &orig) in live.iter().enumerate() {
        canon_of_live[orig] = Some(pos_map[pos]);
    }
    let edge_map: Vec<Option<usize>> = (0..ne)
        .map(|e| resolve(&redirect, e).and_then(|le| canon_of_live[le]))
        .collect();

    let w_new = MultiIndex::new(w.counts()[2..].to_vec())?;
    Ok(Reduction {
        tree: reduced,
        w: w_new,
        shared_vertex: shared,
        edge_map,
        splices,
    })
}

impl Reduction {
    pub fn edge_image(&self, original_edge: usize) -> Option<usize> {
        self.edge_map[original_edge]
    }

    /// Pushes one admissible edge weight of the original tree through the
    /// surgery, yielding an edge weight vector on the reduced tree. One unit
    /// is absorbed per removed leg: a fused pair keeps the sum of its spread
    /// weights, the marker weight of the removed vertex is either consumed
    /// directly or cancelled by unmarking a neighbor, and the neighbor then
    /// marks the fused edge instead.
    ///
    /// Best effort: `None` when the weight has no direct image -- spread
    /// weight resting on a removed leg edge, the shared-vertex shape, no
    /// marked edge left to unmark at the threshold leaf count, or spread
    /// weight caught on the stretch between the spliced vertices and the new
    /// dependent leaf, where the dependence sets flip. A returned vector is
    /// always a member of the reduced tree's admissible family.
    pub fn transfer_theta(&self, original: &WeightedTree, th: &ThetaWeight) -> Option<Vec<u8>> {
        if self.shared_vertex {
            return None;
        }
        if th.sigma[0] > 0 || th.sigma[1] > 0 {
            return None;
        }
        let n = original.leaf_count();
        let ne = original.edge_count();
        let mut rho = th.rho.clone();
        let mut sigma = th.sigma.clone();
        let mut chi: BTreeMap<usize, usize> = th.chi.iter().copied().collect();
        let mut ends: Vec<Option<(usize, usize)>> =
            (0..ne).map(|e| Some(original.endpoints(e))).collect();

        for s in &self.splices {
            let e1 = *chi.get(&s.vertex)?;
            debug_assert!(e1 == s.pair.0 || e1 == s.pair.1);
            let e2 = if e1 == s.pair.0 { s.pair.1 } else { s.pair.0 };
            let u1 = other_end(&ends, e1, s.vertex);
            chi.remove(&s.vertex);
            if rho[e1] == 1 {
                // The removed vertex was the only one marking its edge; that
                // unit is absorbed, the spread weight moves over.
                sigma[e2] += sigma[e1];
                sigma[e1] = 0;
                rho[e1] = 0;
            } else {
                // Both endpoints marked e1; the far one re-marks the fused
                // edge and the unit comes off e2 or, failing that, off some
                // other marked edge at the far vertex.
                debug_assert_eq!(rho[e1], 0);
                debug_assert_eq!(chi.get(&u1), Some(&e1));
                sigma[e2] += sigma[e1];
                sigma[e1] = 0;
                if rho[e2] >= 1 {
                    rho[e2] -= 1;
                    chi.insert(u1, e2);
                } else {
                    // No free slot on the fused edge: the far vertex marks
                    // some other incident edge that still has one.
                    let candidate = incident_alive(&ends, u1)
                        .into_iter()
                        .filter(|&e| {
                            e != e1
                                && rho[e] > 0
                                && ends[e].is_some_and(|(a, b)| a >= n && b >= n)
                        })
                        .min()?;
                    rho[candidate] -= 1;
                    chi.insert(u1, candidate);
                }
            }
            // Fuse the pair: the surviving id carries the combined weight.
            let (a, b) = s.pair;
            sigma[a] += std::mem::take(&mut sigma[b]);
            rho[a] += std::mem::take(&mut rho[b]);
            for target in chi.values_mut() {
                if *target == b {
                    *target = a;
                }
            }
            let fused = (
                other_end(&ends, a, s.vertex),
                other_end(&ends, b, s.vertex),
            );
            ends[a] = Some(fused);
            ends[b] = None;
            ends[s.leg] = None;
        }

        let mut out = vec![0u8; self.tree.edge_count()];
        for e in 0..ne {
            let weight = rho[e] + sigma[e];
            if weight == 0 {
                continue;
            }
            let new = self.edge_map[e]?;
            out[new] += weight;
        }
        debug_assert_eq!(
            out.iter().map(|&t| u32::from(t)).sum::<u32>() + 2,
            th.total()
        );
        let admissible = crate::theta_set(&self.tree, &self.w).ok()?;
        if admissible.iter().any(|tw| tw.theta == out) {
            Some(out)
        } else {
            None
        }
    }
}

/// Scale window and tolerance for the reduction's integral check.
#[derive(Debug, Clone, Copy)]
pub struct IntegrationSpec {
    pub lambda: f64,
    pub lambda0: f64,
    pub log_degree: u32,
    pub rel_tol: f64,
}

impl IntegrationSpec {
    pub fn new(lambda: f64, lambda0: f64, log_degree: u32) -> Self {
        IntegrationSpec {
            lambda,
            lambda0,
            log_degree,
            rel_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReductionCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Integral check for a reduction: the original amplitude, restricted to
/// zero momentum on the removed legs, weighted by the scale and a unit log
/// polynomial, is integrated across the scale window and compared against
/// the reduced amplitude at the lower end times the next-degree polynomial.
/// Returns both sides and their ratio; the bound holds when the ratio stays
/// of order one uniformly over configurations and windows.
pub fn verify_reduction(
    tree: &WeightedTree,
    w: &MultiIndex,
    reduction: &Reduction,
    reduced_cfg: &MomentumConfig,
    spec: &IntegrationSpec,
) -> Result<ReductionCheck, TreesError> {
    if !(spec.lambda > 0.0 && spec.lambda <= spec.lambda0 && spec.lambda0.is_finite()) {
        return Err(TreesError::BadScaleRange {
            lower: spec.lambda,
            upper: spec.lambda0,
        });
    }
    reduced_cfg.validate()?;
    if reduced_cfg.n != reduction.tree.leaf_count() {
        return Err(TreesError::CountMismatch {
            what: "momenta",
            expected: reduction.tree.leaf_count(),
            got: reduced_cfg.n,
        });
    }
    let mut p = Vec::with_capacity(reduced_cfg.n + 2);
    p.push(Vec4::ZERO);
    p.push(Vec4::ZERO);
    p.extend_from_slice(&reduced_cfg.p);
    let restricted = MomentumConfig {
        n: reduced_cfg.n + 2,
        scale: reduced_cfg.scale,
        p,
    };
    restricted.validate()?;

    let ev_initial = QEvaluator::new(tree, w, &restricted)?;
    let ev_reduced = QEvaluator::new(&reduction.tree, &reduction.w, reduced_cfg)?;

    let p_norm = reduced_cfg
        .p
        .iter()
        .map(|q| q.norm_sq())
        .sum::<f64>()
        .sqrt();
    let m = reduced_cfg.scale;
    let k = spec.log_degree;

    // Log substitution keeps the panel count modest across wide windows.
    // Both polynomials carry the window top as their fixed second scale, so
    // the logarithm the integration produces has somewhere to land.
    let (ta, tb) = (spec.lambda.ln(), spec.lambda0.ln());
    let mut integrand = |t: f64| -> Result<f64, TreesError> {
        let lam = t.exp();
        Ok(lam
            * ev_initial.eval(lam)?
            * bounding_log_poly(p_norm, m, 0.0, lam, spec.lambda0, k)
            * lam)
    };
    let lhs = if tb > ta {
        adaptive_simpson(&mut integrand, ta, tb, spec.rel_tol)?
    } else {
        0.0
    };

    // The infrared floor belongs to the restricted kinematics (it vanishes,
    // because two legs sit at zero momentum); recomputing it from the reduced
    // legs alone would cap the right-hand polynomial and lose the log the
    // integration produces when the full weight rides on a vanishing edge.
    let eta = restricted.eta()?;
    let rhs = ev_reduced.eval(spec.lambda)?
        * bounding_log_poly(p_norm, m, eta, spec.lambda, spec.lambda0, k + 1);

    Ok(ReductionCheck {
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}

fn adaptive_simpson<F>(f: &mut F, a: f64, b: f64, rel_tol: f64) -> Result<f64, TreesError>
where
    F: FnMut(f64) -> Result<f64, TreesError>,
{
    fn recurse<F>(
        f: &mut F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        rel_tol: f64,
        depth: u32,
    ) -> Result<f64, TreesError>
    where
        F: FnMut(f64) -> Result<f64, TreesError>,
    {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let refined = left + right;
        if (refined - whole).abs() <= 15.0 * rel_tol * refined.abs().max(f64::MIN_POSITIVE) {
            return Ok(refined + (refined - whole) / 15.0);
        }
        if depth == 0 {
            return Err(TreesError::QuadratureFailed);
        }
        let lv = recurse(f, a, fa, m, fm, flm, left, rel_tol, depth - 1)?;
        let rv = recurse(f, m, fm, b, fb, frm, right, rel_tol, depth - 1)?;
        Ok(lv + rv)
    }

    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, fa, b, fb, fm, whole, rel_tol, 48)
}
