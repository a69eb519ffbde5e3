use fe_estimates::{prop_jets, CaseId};
use fe_momenta::Vec4;
use fe_regulator::{prop, prop_deriv, DerivIndex, PropKind, PropValue, Regulator};

fn comps(v: &PropValue) -> Vec<f64> {
    match v {
        PropValue::Scalar(s) => vec![*s],
        PropValue::Matrix(m) => m.iter().flatten().copied().collect(),
    }
}

fn fd_alpha(p: Vec4, reg: &Regulator, alpha: [u8; 4], comp: usize, h: f64) -> f64 {
    fn rec(p: Vec4, reg: &Regulator, mut alpha: [u8; 4], comp: usize, h: f64) -> f64 {
        match alpha.iter().position(|&a| a > 0) {
            None => comps(&prop(PropKind::Gauge, p, reg).unwrap())[comp],
            Some(i) => {
                alpha[i] -= 1;
                let mut pp = p;
                pp.0[i] += h;
                let mut pm = p;
                pm.0[i] -= h;
                (rec(pp, reg, alpha, comp, h) - rec(pm, reg, alpha, comp, h)) / (2.0 * h)
            }
        }
    }
    let d1 = rec(p, reg, alpha, comp, h);
    let d2 = rec(p, reg, alpha, comp, 2.0 * h);
    (4.0 * d1 - d2) / 3.0
}

fn main() {
    let grid = CaseId::DC.default_grid();
    let n = grid.len();
    'outer: for i in 0..n {
        let raw = point(&grid, i);
        let (la, fac, pf, dir, w, xi) = (raw[0], raw[1], raw[2], raw[3] as u8, raw[4] as u8, raw[5]);
        let reg = Regulator::new(la, la * fac, xi).unwrap();
        let d = [
            [1.0, 0.0, 0.0, 0.0],
            [0.5, 0.5, 0.5, 0.5],
            [0.6, 0.0, -0.8, 0.0],
        ][dir as usize];
        let r = pf * la;
        let p = Vec4([r * d[0], r * d[1], r * d[2], r * d[3]]);
        let jets = prop_jets(PropKind::Gauge, p, &reg, w).unwrap();
        let floor = (1e-9 * fact(w) / (la + p.norm()).powi(w as i32 + 2)).max(1e-280);
        for di in DerivIndex::all(w) {
            if di.order() != w {
                continue;
            }
            let a = comps(&prop_deriv(PropKind::Gauge, p, &reg, di).unwrap());
            let b = comps(&jets.deriv(&di.0));
            for ci in 0..a.len() {
                let (x, y) = (a[ci], b[ci]);
                if x.abs() <= floor && y.abs() <= floor {
                    continue;
                }
                if (x - y).abs() > 1e-8 * x.abs().max(y.abs()) {
                    println!(
                        "la={la} fac={fac} pf={pf} dir={dir} w={w} xi={xi} alpha={:?} comp=({},{})",
                        di.0, ci / 4, ci % 4
                    );
                    println!("  table route  {x:.12e}");
                    println!("  jets  route  {y:.12e}");
                    let h = 0.02 * (la + p.norm());
                    println!("  fd referee   {:.12e}", fd_alpha(p, &reg, di.0, ci, h));
                    break 'outer;
                }
            }
        }
    }
    println!("scan done");
}

fn fact(n: u8) -> f64 {
    (1..=n as i32).map(|i| i as f64).product()
}

fn point(grid: &fe_estimates::GridSpec, mut idx: u64) -> Vec<f64> {
    let mut out = vec![0.0; grid.axes.len()];
    for (slot, axis) in out.iter_mut().zip(&grid.axes).rev() {
        let m = axis.points.len() as u64;
        *slot = axis.points[(idx % m) as usize];
        idx /= m;
    }
    out
}
