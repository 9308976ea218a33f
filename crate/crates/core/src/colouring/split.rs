//! Random bipartitions that roughly halve the maximum degree and quarter the
//! neighbourhood edge counts, and their iteration.

use super::{ColouringError, FailureReport, Phase};
use crate::graph::{neighbourhood_edge_count, Graph};
use rand::Rng;
use serde::Serialize;

/// What one bipartition achieved against the target bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SplitAudit {
    pub max_degree: usize,
    /// The largest neighbourhood edge count in the graph being split.
    pub span: usize,
    /// `Δ/2 + 2√(Δ log Δ)`.
    pub degree_bound: f64,
    /// `s/4 + 2Δ^{3/2}√(log Δ)`.
    pub span_bound: f64,
    pub part_max_degrees: [usize; 2],
    pub part_spans: [usize; 2],
    pub tries: u64,
    /// Set when `Δ < 2`, where the bounds are not meaningful and the first draw is accepted.
    pub vacuous: bool,
}

impl SplitAudit {
    fn passes(&self) -> bool {
        (0..2).all(|i| self.part_max_degrees[i] as f64 <= self.degree_bound && self.part_spans[i] as f64 <= self.span_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bipartition {
    pub parts: [Vec<usize>; 2],
    pub audit: SplitAudit,
}

fn log0(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// `Δ/2 + 2√(Δ log Δ)`, with `log` clamped at 0 below 1.
pub fn next_degree(delta: f64) -> f64 {
    delta / 2.0 + 2.0 * (delta * log0(delta)).sqrt()
}

/// `s/4 + 2Δ^{3/2}√(log Δ)`, with `log` clamped at 0 below 1.
pub fn next_span(span: f64, delta: f64) -> f64 {
    span / 4.0 + 2.0 * delta.powf(1.5) * log0(delta).sqrt()
}

fn part_stats(g: &Graph, part: &[usize]) -> (usize, usize) {
    if part.is_empty() {
        return (0, 0);
    }
    let h = g.induced_on(part).expect("part vertices are in range");
    let span = (0..h.n()).map(|v| neighbourhood_edge_count(&h, v)).max().unwrap_or(0);
    (h.max_degree(), span)
}

/// A uniform random bipartition, redrawn until both parts satisfy both bounds.
pub fn split_partition<R: Rng + ?Sized>(g: &Graph, max_tries: u64, rng: &mut R) -> Result<Bipartition, ColouringError> {
    let delta = g.max_degree();
    let span = (0..g.n()).map(|v| neighbourhood_edge_count(g, v)).max().unwrap_or(0);
    let d = delta as f64;
    let mut best: Option<Bipartition> = None;
    for tries in 1..=max_tries.max(1) {
        let mut parts = [Vec::new(), Vec::new()];
        for v in 0..g.n() {
            parts[rng.gen_range(0..2)].push(v);
        }
        let (a, b) = (part_stats(g, &parts[0]), part_stats(g, &parts[1]));
        let audit = SplitAudit {
            max_degree: delta,
            span,
            degree_bound: next_degree(d),
            span_bound: next_span(span as f64, d),
            part_max_degrees: [a.0, b.0],
            part_spans: [a.1, b.1],
            tries,
            vacuous: delta < 2,
        };
        let ok = audit.vacuous || audit.passes();
        let candidate = Bipartition { parts, audit };
        if ok {
            return Ok(candidate);
        }
        let worse = |x: &Bipartition| x.audit.part_max_degrees.iter().max().copied().unwrap_or(0);
        if best.as_ref().map_or(true, |b| worse(&candidate) < worse(b)) {
            best = Some(candidate);
        }
    }
    let best = best.expect("at least one try");
    Err(ColouringError::Failure(FailureReport {
        phase: Phase::Split,
        vertex: None,
        reason: format!(
            "no bipartition within {max_tries} tries; best part degrees {:?} against {:.3}, spans {:?} against {:.3}",
            best.audit.part_max_degrees, best.audit.degree_bound, best.audit.part_spans, best.audit.span_bound
        ),
        rounds: max_tries,
        trace: vec![],
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SplitResult {
    pub parts: Vec<Vec<usize>>,
    /// `Δ_0, …, Δ_j`.
    pub degree_sequence: Vec<f64>,
    /// `s_0, …, s_j` with `s_0 = Δ²/f`.
    pub span_sequence: Vec<f64>,
    pub j: usize,
    pub audits: Vec<SplitAudit>,
}

/// The least `j ≥ 0` with `f > ((1+δ)Δ/2^j)^{ζ(2+δ)}`.
pub fn split_depth(max_degree: f64, f: f64, delta: f64, zeta: f64) -> usize {
    let e = zeta * (2.0 + delta);
    (0..).find(|&j| f > ((1.0 + delta) * max_degree / 2f64.powi(j as i32)).powf(e)).expect("the right side tends to 0")
}

/// Splits `j` times, where `j` is [`split_depth`]; parts of maximum degree at
/// most 1 are left alone and empty parts are dropped.
pub fn iterated_split<R: Rng + ?Sized>(
    g: &Graph,
    f: f64,
    delta: f64,
    zeta: f64,
    max_tries: u64,
    rng: &mut R,
) -> Result<SplitResult, ColouringError> {
    if !(delta > 0.0 && delta < 0.01) {
        return Err(ColouringError::InvalidInput(format!("delta must lie in (0, 1/100), got {delta}")));
    }
    if !(zeta > 0.0 && zeta * (2.0 + delta) < 0.1) {
        return Err(ColouringError::InvalidInput(format!("need zeta > 0 and zeta(2 + delta) < 1/10, got zeta = {zeta}")));
    }
    if !(f > 0.0 && f.is_finite()) {
        return Err(ColouringError::InvalidInput(format!("f must be positive, got {f}")));
    }
    let d0 = g.max_degree() as f64;
    let j = split_depth(d0, f, delta, zeta);
    let mut degree_sequence = vec![d0];
    let mut span_sequence = vec![d0 * d0 / f];
    for t in 0..j {
        span_sequence.push(next_span(span_sequence[t], degree_sequence[t]));
        degree_sequence.push(next_degree(degree_sequence[t]));
    }
    let mut parts: Vec<Vec<usize>> = vec![(0..g.n()).collect()];
    let mut audits = Vec::new();
    for _ in 0..j {
        let mut next = Vec::new();
        for part in parts {
            let h = g.induced_on(&part)?;
            if h.max_degree() <= 1 {
                next.push(part);
                continue;
            }
            let split = split_partition(&h, max_tries, rng)?;
            audits.push(split.audit);
            for side in split.parts {
                if !side.is_empty() {
                    next.push(side.into_iter().map(|i| part[i]).collect());
                }
            }
        }
        parts = next;
    }
    Ok(SplitResult { parts, degree_sequence, span_sequence, j, audits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, erdos_renyi, random_regular};
    use crate::seeded_rng;

    #[test]
    fn edgeless_accepts_first_draw() {
        let s = split_partition(&Graph::edgeless(10), 5, &mut seeded_rng(0)).unwrap();
        assert_eq!(s.audit.tries, 1);
        assert!(s.audit.vacuous);
    }

    #[test]
    fn triangle_bounds_are_literal() {
        let s = split_partition(&complete(3), 10, &mut seeded_rng(1)).unwrap();
        let expected = 1.0 + 2.0 * (2.0 * 2f64.ln()).sqrt();
        assert_eq!(s.audit.degree_bound, expected);
        assert_eq!(s.audit.span, 1);
        assert!(!s.audit.vacuous);
    }

    #[test]
    fn cubic_graphs_split_quickly() {
        for seed in 0..20 {
            let g = random_regular(50, 3, seed).unwrap();
            let s = split_partition(&g, 20, &mut seeded_rng(seed)).unwrap();
            let mut all: Vec<usize> = s.parts.concat();
            all.sort_unstable();
            assert_eq!(all, (0..50).collect::<Vec<_>>());
        }
    }

    #[test]
    fn depth_zero_is_identity() {
        let g = random_regular(20, 3, 1).unwrap();
        let r = iterated_split(&g, 1e6, 0.005, 0.04, 10, &mut seeded_rng(0)).unwrap();
        assert_eq!(r.j, 0);
        assert_eq!(r.parts, vec![(0..20).collect::<Vec<_>>()]);
    }

    #[test]
    fn sequences_and_part_count() {
        let g = erdos_renyi(60, 0.2, 2).unwrap();
        let d = g.max_degree() as f64;
        let r = iterated_split(&g, 1.01, 0.005, 0.045, 200, &mut seeded_rng(3)).unwrap();
        assert!(r.j >= 1);
        assert_eq!(r.degree_sequence[1], d / 2.0 + 2.0 * (d * d.ln()).sqrt());
        assert!(r.parts.len() <= 1 << r.j);
        let mut all: Vec<usize> = r.parts.concat();
        all.sort_unstable();
        assert_eq!(all, (0..60).collect::<Vec<_>>());
    }

    #[test]
    fn parameter_ranges_are_checked() {
        let g = complete(4);
        assert!(iterated_split(&g, 2.0, 0.02, 0.01, 5, &mut seeded_rng(0)).is_err());
        assert!(iterated_split(&g, 2.0, 0.005, 0.05, 5, &mut seeded_rng(0)).is_err());
    }
}
