//! Shared oracles for the integration suites.

use extrema::CadlagStepPath;
use rand::Rng;

/// Random step path on (0, 1] with at most `max_jumps` jumps.
pub fn random_path(rng: &mut impl Rng, max_jumps: usize) -> CadlagStepPath {
    let k = rng.random_range(0..=max_jumps);
    let mut times: Vec<f64> = (0..k).map(|_| rng.random_range(0.02..0.98)).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let jumps = times
        .into_iter()
        .map(|t| (t, rng.random_range(-1.5..1.5)))
        .collect();
    CadlagStepPath::new((0.0, 1.0), rng.random_range(-1.5..1.5), jumps).unwrap()
}

/// Uniform distance on [a, b], sampled at discontinuities.
pub fn sup_distance(p: &CadlagStepPath, q: &CadlagStepPath, a: f64, b: f64) -> f64 {
    let mut points: Vec<f64> = vec![a, b];
    points.extend(p.jumps().iter().map(|&(t, _)| t));
    points.extend(q.jumps().iter().map(|&(t, _)| t));
    let mut sup = 0.0f64;
    for &t in &points {
        if t < a || t > b {
            continue;
        }
        sup = sup.max((p.value_at(t) - q.value_at(t)).abs());
        let before = (t - 1e-12).max(a);
        sup = sup.max((p.value_at(before) - q.value_at(before)).abs());
    }
    sup
}

/// Brute-force `J1` distance over piecewise-linear time changes.
///
/// Candidate node images come from a grid containing both jump sets and
/// the quartile points between adjacent critical times, which is enough
/// to realize every optimal alignment exactly. Independent of the DP in
/// `extrema::skorokhod`: candidates are costed by direct evaluation of
/// `max(‖p∘h − q‖, ‖h − id‖)`.
pub fn brute_force_d_ab(p: &CadlagStepPath, q: &CadlagStepPath, a: f64, b: f64) -> f64 {
    let q_times: Vec<f64> = q.jumps().iter().map(|&(t, _)| t).collect();
    let mut criticals: Vec<f64> = vec![a, b];
    criticals.extend(p.jumps().iter().map(|&(t, _)| t));
    criticals.extend(q_times.iter().copied());
    criticals.sort_by(f64::total_cmp);
    criticals.dedup();
    let mut grid = Vec::new();
    for i in 0..=24 {
        grid.push(a + (b - a) * i as f64 / 24.0);
    }
    for w in criticals.windows(2) {
        for frac in [0.25, 0.5, 0.75] {
            grid.push(w[0] + (w[1] - w[0]) * frac);
        }
    }
    grid.extend(criticals.iter().copied());
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid.retain(|&g| g > a && g < b);

    let mut best = sup_distance(p, q, a, b); // h = id is always a candidate
    let mut assignment = vec![0usize; q_times.len()];
    search_assignments(p, q, &q_times, &grid, 0, 0, &mut assignment, &mut best, a, b);
    best
}

#[allow(clippy::too_many_arguments)]
fn search_assignments(
    p: &CadlagStepPath,
    q: &CadlagStepPath,
    q_times: &[f64],
    grid: &[f64],
    depth: usize,
    start: usize,
    assignment: &mut [usize],
    best: &mut f64,
    a: f64,
    b: f64,
) {
    if depth == q_times.len() {
        let nodes: Vec<(f64, f64)> = q_times
            .iter()
            .zip(assignment.iter())
            .map(|(&t, &gi)| (t, grid[gi]))
            .collect();
        let cost = evaluate_time_change(p, q, &nodes, a, b);
        if cost < *best {
            *best = cost;
        }
        return;
    }
    for gi in start..grid.len() {
        assignment[depth] = gi;
        search_assignments(p, q, q_times, grid, depth + 1, gi + 1, assignment, best, a, b);
    }
}

fn evaluate_time_change(
    p: &CadlagStepPath,
    q: &CadlagStepPath,
    nodes: &[(f64, f64)],
    a: f64,
    b: f64,
) -> f64 {
    let mut xs = vec![a];
    let mut ys = vec![a];
    for &(t, ht) in nodes {
        xs.push(t);
        ys.push(ht);
    }
    xs.push(b);
    ys.push(b);
    let h = |t: f64| -> f64 {
        let i = xs.partition_point(|&x| x <= t).clamp(1, xs.len() - 1);
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (y0, y1) = (ys[i - 1], ys[i]);
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    };
    let h_inv = |y: f64| -> f64 {
        let i = ys.partition_point(|&v| v <= y).clamp(1, ys.len() - 1);
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (y0, y1) = (ys[i - 1], ys[i]);
        x0 + (x1 - x0) * (y - y0) / (y1 - y0)
    };
    let time_term = nodes
        .iter()
        .fold(0.0f64, |acc, &(t, ht)| acc.max((ht - t).abs()));
    // Sample p∘h − q around every discontinuity of either path.
    let mut crit: Vec<f64> = vec![a, b];
    crit.extend(q.jumps().iter().map(|&(t, _)| t));
    crit.extend(p.jumps().iter().map(|&(t, _)| h_inv(t)));
    let mut value_term = 0.0f64;
    for &t in &crit {
        for probe in [t - 1e-9, t, t + 1e-9] {
            if probe < a || probe > b {
                continue;
            }
            value_term = value_term.max((p.value_at(h(probe)) - q.value_at(probe)).abs());
        }
    }
    time_term.max(value_term)
}
