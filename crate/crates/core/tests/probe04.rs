//! Temporary diagnosis probe for the chart-distance oracle (deleted before
//! release).

use hullfront::sampling::seeded_box;
use hullfront::swallowtail::{project_to_v3, ProjectionConfig, QuarticPoint};

fn chart_dist_sq(q: [f64; 3], tau: f64, u: f64) -> f64 {
    let uu = u.max(-2.0 * tau * tau);
    let t2 = tau * tau;
    let v = -4.0 * t2 * tau - 2.0 * uu * tau;
    let w = 3.0 * t2 * t2 + uu * t2;
    let (du, dv, dw) = (q[0] - uu, q[1] - v, q[2] - w);
    du * du + dv * dv + dw * dw
}

fn oracle_verbose(q: [f64; 3], chatty: bool) -> f64 {
    let (t_lo, t_step, t_n) = (-1.9_f64, 0.02_f64, 191_usize);
    let (u_lo, u_step, u_n) = (-7.3_f64, 0.05_f64, 347_usize);
    let mut columns = Vec::with_capacity(t_n);
    for i in 0..t_n {
        let tau = t_lo + t_step * i as f64;
        let mut best = (0.0_f64, f64::INFINITY);
        for j in 0..u_n {
            let u = u_lo + u_step * j as f64;
            let d = chart_dist_sq(q, tau, u);
            if d < best.1 {
                best = (u, d);
            }
        }
        columns.push((tau, best.0, best.1));
    }
    let mut order: Vec<usize> = (0..t_n).collect();
    order.sort_by(|&a, &b| columns[a].2.total_cmp(&columns[b].2));
    let mut picks: Vec<usize> = Vec::new();
    for &i in &order {
        if picks.iter().all(|&p| i.abs_diff(p) >= 5) {
            picks.push(i);
            if picks.len() == 6 {
                break;
            }
        }
    }
    let mut best = f64::INFINITY;
    for &i in &picks {
        let (mut ct, mut cu, _) = columns[i];
        if chatty {
            eprintln!(
                "  pick tau={ct:.4} u={cu:.4} coarse d={:.9}",
                columns[i].2.sqrt()
            );
        }
        let (mut ht, mut hu) = (t_step, u_step);
        for _ in 0..5 {
            let (st, su) = (ht / 10.0, hu / 10.0);
            let mut local = (ct, cu, f64::INFINITY);
            for a in 0..101 {
                let tau = ct - 5.0 * ht + st * a as f64;
                for b in 0..101 {
                    let u = cu - 5.0 * hu + su * b as f64;
                    let d = chart_dist_sq(q, tau, u);
                    if d < local.2 {
                        local = (tau, u, d);
                    }
                }
            }
            ct = local.0;
            cu = local.1;
            ht = st;
            hu = su;
            best = best.min(local.2);
        }
        if chatty {
            eprintln!("    refined to tau={ct:.6} u={cu:.6} d={:.9}", best.sqrt());
        }
    }
    best.sqrt()
}

#[test]
#[ignore]
fn probe_worst_query() {
    let cfg = ProjectionConfig::default();
    let raw = seeded_box::<3>(44, [-4.0; 3], [4.0; 3], 4000);
    let queries: Vec<[f64; 3]> = raw
        .into_iter()
        .filter(|&[u, v, w]| QuarticPoint::new(u, v, w).min_value().0 < -1e-3)
        .take(1000)
        .collect();
    let mut worst = (0.0f64, [0.0; 3]);
    for &q in queries.iter() {
        let proj = project_to_v3(q, &cfg).unwrap();
        let gap = (proj.distance - oracle_verbose(q, false)).abs();
        if gap > worst.0 {
            worst = (gap, q);
        }
    }
    let q = worst.1;
    let proj = project_to_v3(q, &cfg).unwrap();
    eprintln!(
        "worst gap {:.3e} at {q:?}\nsolver d={:.9} foot={:?} active_taus={:?} normal_tau={:?}",
        worst.0, proj.distance, proj.foot, proj.active_taus, proj.normal_tau
    );
    eprintln!("oracle walk:");
    let od = oracle_verbose(q, true);
    eprintln!("oracle d={od:.9}");
    // Ultra-fine scan near the solver's foot parameters.
    if let Some(t0) = proj.active_taus.first().copied() {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for a in -2000..=2000 {
            let tau = t0 + a as f64 * 1e-5;
            for b in -400..=400 {
                let u = proj.foot[0] + b as f64 * 1e-4;
                let d = chart_dist_sq(q, tau, u);
                if d < best.0 {
                    best = (d, tau, u);
                }
            }
        }
        eprintln!(
            "fine scan near foot: d={:.9} at tau={:.6} u={:.6}",
            best.0.sqrt(),
            best.1,
            best.2
        );
    }
}
