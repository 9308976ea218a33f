//! The two-phase cover colouring procedure: a hard-core partial colouring
//! repaired by local resampling, then a Moser–Tardos finish.

use super::cover::{verify_colouring, Cover};
use super::{ColouringError, FailureReport, Phase};
use crate::bitset::VertexSet;
use crate::hardcore::{Fugacity, SampleMethod, SamplerMode};
use rand::Rng;
use serde::Serialize;

/// The divisor in `ℓ*_u = min_{v ∈ N(u)} ℓ_v / divisor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FinishingFactor {
    /// The local-lemma finish.
    #[default]
    Eighth,
    /// The larger factor a transversal theorem allows.
    Half,
}

impl FinishingFactor {
    pub fn divisor(self) -> usize {
        match self {
            FinishingFactor::Eighth => 8,
            FinishingFactor::Half => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ColourConfig {
    pub phase1_rounds: u64,
    pub phase2_rounds: u64,
    pub sampler: SamplerMode,
    pub factor: FinishingFactor,
}

impl Default for ColourConfig {
    fn default() -> Self {
        ColourConfig { phase1_rounds: 1000, phase2_rounds: 1000, sampler: SamplerMode::default(), factor: FinishingFactor::Eighth }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum ViolationKind {
    /// `|L_I(u)| < ℓ_u`.
    ShortList { have: usize, need: usize },
    /// Some `x ∈ L_I(u)` has more than `ℓ*_u` cross neighbours left.
    HighDegree { colour: usize, degree: usize, limit: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub round: u64,
    pub vertex: usize,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Phase1Stats {
    pub rounds: u64,
    pub initial_method: SampleMethod,
    pub glauber_resamples: u64,
}

/// An independent set `I` of `H` with its residual lists `L_I(u)` and the
/// residual cross degrees `deg*_{H_I}(x)`, recomputed from `I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PartialColouring {
    pub chosen: Vec<usize>,
    pub domain: Vec<usize>,
    /// `L_I(u)` for uncoloured `u`; empty for coloured vertices.
    pub residual_lists: Vec<Vec<usize>>,
    /// `deg*_{H_I}(x)` for surviving colours; 0 for removed ones.
    pub residual_degrees: Vec<usize>,
}

impl PartialColouring {
    pub fn from_chosen(cover: &Cover, chosen: &[usize]) -> Result<PartialColouring, ColouringError> {
        let h = cover.conflict();
        let set = VertexSet::from_indices(h.n(), chosen.iter().copied());
        if set.len() != chosen.len() || !h.is_independent(&set) {
            return Err(ColouringError::InvalidInput("chosen colours are not an independent set of H".into()));
        }
        let blocked = closed_neighbourhood(cover, chosen);
        let mut coloured = vec![false; cover.base().n()];
        for &x in chosen {
            coloured[cover.owner(x)] = true;
        }
        let residual_lists: Vec<Vec<usize>> = (0..cover.base().n())
            .map(|u| if coloured[u] { vec![] } else { cover.block(u).iter().copied().filter(|&x| !blocked[x]).collect() })
            .collect();
        let residual_degrees =
            (0..h.n()).map(|x| if blocked[x] { 0 } else { cover.cross_neighbours(x).filter(|&y| !blocked[y]).count() }).collect();
        let mut chosen = chosen.to_vec();
        chosen.sort_unstable();
        Ok(PartialColouring {
            chosen,
            domain: (0..coloured.len()).filter(|&u| coloured[u]).collect(),
            residual_lists,
            residual_degrees,
        })
    }

    /// The lowest vertex whose bad event occurs, if any.
    pub fn first_violation(&self, cover: &Cover, ell: &[usize], factor: FinishingFactor, round: u64) -> Option<Violation> {
        (0..cover.base().n()).find_map(|u| self.violation_at(cover, u, ell, factor, round))
    }

    fn violation_at(&self, cover: &Cover, u: usize, ell: &[usize], factor: FinishingFactor, round: u64) -> Option<Violation> {
        if self.domain.binary_search(&u).is_ok() {
            return None;
        }
        let list = &self.residual_lists[u];
        if list.len() < ell[u] {
            return Some(Violation { round, vertex: u, kind: ViolationKind::ShortList { have: list.len(), need: ell[u] } });
        }
        let min_ell = cover.base().neighbours(u).iter().map(|&v| ell[v]).min()?;
        let div = factor.divisor();
        list.iter().find(|&&x| self.residual_degrees[x] * div > min_ell).map(|&x| Violation {
            round,
            vertex: u,
            kind: ViolationKind::HighDegree {
                colour: x,
                degree: self.residual_degrees[x],
                limit: min_ell as f64 / div as f64,
            },
        })
    }
}

/// `N_H[I]` as a membership vector.
fn closed_neighbourhood(cover: &Cover, chosen: &[usize]) -> Vec<bool> {
    let mut blocked = vec![false; cover.conflict().n()];
    for &x in chosen {
        blocked[x] = true;
        for &y in cover.conflict().neighbours(x) {
            blocked[y] = true;
        }
    }
    blocked
}

fn check_targets(cover: &Cover, ell: &[usize]) -> Result<(), ColouringError> {
    if ell.len() != cover.base().n() {
        return Err(ColouringError::InvalidInput(format!("{} targets for {} vertices", ell.len(), cover.base().n())));
    }
    Ok(())
}

/// Phase one: draw `I` from the hard-core model on `H` at fugacity `λ`, then
/// while some bad event `B_u` occurs (lowest `u` first) redraw `I` on `L(N[u])`
/// from the hard-core law conditioned on the rest of `I`.
pub fn phase1_partial<R: Rng + ?Sized>(
    cover: &Cover,
    lambda: Fugacity,
    ell: &[usize],
    config: &ColourConfig,
    rng: &mut R,
) -> Result<(PartialColouring, Phase1Stats), ColouringError> {
    check_targets(cover, ell)?;
    // A target above the full list can only be met by colouring u; fail before sampling.
    if let Some(u) = (0..cover.base().n()).find(|&u| ell[u] > cover.block(u).len()) {
        return Err(ColouringError::Failure(FailureReport {
            phase: Phase::Partial,
            vertex: Some(u),
            reason: format!("target {} exceeds the list size {}", ell[u], cover.block(u).len()),
            rounds: 0,
            trace: vec![],
        }));
    }
    let h = cover.conflict();
    let (first, initial_method) = config.sampler.sample_within(h, &h.vertex_set(), lambda, rng)?;
    let mut chosen = first.to_vec();
    let mut glauber_resamples = 0;
    let mut trace = Vec::new();
    for round in 0..=config.phase1_rounds {
        let partial = PartialColouring::from_chosen(cover, &chosen)?;
        let Some(violation) = partial.first_violation(cover, ell, config.factor, round) else {
            return Ok((partial, Phase1Stats { rounds: round, initial_method, glauber_resamples }));
        };
        let u = violation.vertex;
        trace.push(violation);
        if round == config.phase1_rounds {
            break;
        }
        let mut region = vec![false; h.n()];
        for v in std::iter::once(u).chain(cover.base().neighbours(u).iter().copied()) {
            for &x in cover.block(v) {
                region[x] = true;
            }
        }
        chosen.retain(|&x| !region[x]);
        let blocked = closed_neighbourhood(cover, &chosen);
        let free = VertexSet::from_indices(h.n(), (0..h.n()).filter(|&x| region[x] && !blocked[x]));
        let (redraw, method) = config.sampler.sample_within(h, &free, lambda, rng)?;
        if matches!(method, SampleMethod::Glauber { .. }) {
            glauber_resamples += 1;
        }
        chosen.extend(redraw.iter());
    }
    Err(ColouringError::Failure(FailureReport {
        phase: Phase::Partial,
        vertex: trace.last().map(|v| v.vertex),
        reason: format!("bad events remain after {} resampling rounds", config.phase1_rounds),
        rounds: config.phase1_rounds,
        trace,
    }))
}

/// Checks `ℓ_u ≥ 3`, `|L(u)| ≥ ℓ_u` and `deg*(x) ≤ min_{v ∈ N(u)} ℓ_v / divisor`.
pub fn finishing_audit(cover: &Cover, ell: &[usize], factor: FinishingFactor) -> Result<(), ColouringError> {
    check_targets(cover, ell)?;
    let fail = |vertex: usize, reason: String| Err(ColouringError::Precondition { vertex, reason });
    for u in 0..cover.base().n() {
        if ell[u] < 3 {
            return fail(u, format!("target {} is below 3", ell[u]));
        }
        if cover.block(u).len() < ell[u] {
            return fail(u, format!("list size {} is below the target {}", cover.block(u).len(), ell[u]));
        }
        if let Some(min_ell) = cover.base().neighbours(u).iter().map(|&v| ell[v]).min() {
            for &x in cover.block(u) {
                let d = cover.star_degree(x);
                if d * factor.divisor() > min_ell {
                    return fail(u, format!("colour {x} has {d} cross neighbours, above {min_ell}/{}", factor.divisor()));
                }
            }
        }
    }
    Ok(())
}

/// Phase two: a uniform colour per vertex, then while some cross edge of `H`
/// joins two chosen colours (lowest vertex first), redraw both endpoints.
/// Refuses covers failing [`finishing_audit`].
pub fn phase2_finish<R: Rng + ?Sized>(
    cover: &Cover,
    ell: &[usize],
    max_rounds: u64,
    factor: FinishingFactor,
    rng: &mut R,
) -> Result<(Vec<usize>, u64), ColouringError> {
    finishing_audit(cover, ell, factor)?;
    let n = cover.base().n();
    let draw = |u: usize, rng: &mut R| cover.block(u)[rng.gen_range(0..cover.block(u).len())];
    let mut choice: Vec<usize> = (0..n).map(|u| draw(u, rng)).collect();
    for round in 0..=max_rounds {
        let conflict = (0..n).find_map(|u| {
            cover.cross_neighbours(choice[u]).map(|y| cover.owner(y)).find(|&v| v > u && cover.conflict().has_edge(choice[u], choice[v])).map(|v| (u, v))
        });
        let Some((u, v)) = conflict else {
            return Ok((choice, round));
        };
        if round == max_rounds {
            return Err(ColouringError::Failure(FailureReport {
                phase: Phase::Finish,
                vertex: Some(u),
                reason: format!("conflicts remain after {max_rounds} resampling rounds"),
                rounds: max_rounds,
                trace: vec![],
            }));
        }
        choice[u] = draw(u, rng);
        choice[v] = draw(v, rng);
    }
    unreachable!("the loop returns on its last round")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PhaseStats {
    pub phase1: Phase1Stats,
    pub coloured_in_phase1: usize,
    pub phase2_rounds: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ColouringCertificate {
    /// One colour node per base vertex, in vertex order.
    pub chosen: Vec<usize>,
    pub verified: bool,
    pub phase_stats: PhaseStats,
}

/// Both phases end to end. The result is checked with [`verify_colouring`]
/// before it is returned.
pub fn colour(
    cover: &Cover,
    lambda: Fugacity,
    ell: &[usize],
    config: &ColourConfig,
    seed: u64,
) -> Result<ColouringCertificate, ColouringError> {
    let mut rng = crate::seeded_rng(seed);
    let (partial, phase1) = phase1_partial(cover, lambda, ell, config, &mut rng)?;
    let residual = cover.residual(&partial.chosen)?;
    let residual_ell: Vec<usize> = residual.vertex_map.iter().map(|&u| ell[u]).collect();
    let (finish, phase2_rounds) = phase2_finish(&residual.cover, &residual_ell, config.phase2_rounds, config.factor, &mut rng)?;
    let mut chosen: Vec<usize> = partial.chosen.clone();
    chosen.extend(finish.iter().map(|&x| residual.colour_map[x]));
    chosen.sort_by_key(|&x| cover.owner(x));
    if !verify_colouring(cover, &chosen) {
        return Err(ColouringError::Internal("assembled colouring failed verification".into()));
    }
    Ok(ColouringCertificate {
        chosen,
        verified: true,
        phase_stats: PhaseStats { phase1, coloured_in_phase1: partial.domain.len(), phase2_rounds },
    })
}
