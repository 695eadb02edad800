//! The four principles-of-access allocation rules.
//!
//! Each allocator distributes one interval's required curtailment across the
//! fleet and returns per-generator curtailed MW aligned with the fleet's
//! generator order. Stateful rules (rotation and quota round-robin) thread a
//! [`RotationState`] between calls; one call corresponds to one curtailment
//! event.

use crate::EPSILON_MW;

use super::{Allocation, CurtailmentError, Fleet};

/// Curtailment needed to keep total output within demand:
/// `max(0, sum(outputs) - demand_mw)`.
pub fn required_curtailment(outputs_mw: &[f64], demand_mw: f64) -> f64 {
    let total: f64 = outputs_mw.iter().sum();
    (total - demand_mw).max(0.0)
}

/// Mutable cursor shared by the rotation and quota round-robin rules.
///
/// `pointer` is a position in the fleet's rotation order (ascending
/// connection order); `quotas_mw` holds each generator's remaining MW quota,
/// indexed like the fleet, and is only meaningful for the quota rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationState {
    pub pointer: usize,
    pub quotas_mw: Vec<f64>,
}

impl RotationState {
    /// Fresh state: pointer at the first generator in rotation order and
    /// full quotas equal to each generator's rating.
    pub fn new(fleet: &Fleet) -> Self {
        Self {
            pointer: 0,
            quotas_mw: fleet.generators().iter().map(|g| g.rated_mw).collect(),
        }
    }
}

fn validate_interval(
    fleet: &Fleet,
    outputs_mw: &[f64],
    required_mw: f64,
) -> Result<(), CurtailmentError> {
    if outputs_mw.len() != fleet.len() {
        return Err(CurtailmentError::LengthMismatch {
            left: outputs_mw.len(),
            right: fleet.len(),
        });
    }
    let mut total = 0.0;
    for (i, (&out, gen)) in outputs_mw.iter().zip(fleet.generators()).enumerate() {
        if !out.is_finite() || out < 0.0 {
            return Err(CurtailmentError::InvalidOutput {
                index: i,
                value: out,
            });
        }
        if out > gen.rated_mw + EPSILON_MW {
            return Err(CurtailmentError::OutputExceedsRating {
                index: i,
                output_mw: out,
                rated_mw: gen.rated_mw,
            });
        }
        total += out;
    }
    if !required_mw.is_finite() || required_mw < 0.0 {
        return Err(CurtailmentError::InvalidRequired(required_mw));
    }
    if required_mw > total + EPSILON_MW {
        return Err(CurtailmentError::RequiredExceedsAvailable {
            required_mw,
            available_mw: total,
        });
    }
    Ok(())
}

/// Last-in first-out: curtail the most recently connected generators first,
/// each down to zero before touching the next.
pub fn allocate_lifo(
    fleet: &Fleet,
    outputs_mw: &[f64],
    required_mw: f64,
) -> Result<Allocation, CurtailmentError> {
    validate_interval(fleet, outputs_mw, required_mw)?;
    let mut curtailed = vec![0.0; fleet.len()];
    let mut left = required_mw;
    for &idx in &fleet.lifo_order() {
        if left <= EPSILON_MW {
            break;
        }
        let take = left.min(outputs_mw[idx]);
        curtailed[idx] = take;
        left -= take;
    }
    Ok(Allocation {
        curtailed_mw: curtailed,
        required_mw,
    })
}

/// Rotation: the generator under the pointer is curtailed first (entirely if
/// needed), continuing down the rotation order until the requirement is met.
/// The pointer then advances by exactly one generator, whether or not any
/// curtailment was required.
pub fn allocate_rota(
    fleet: &Fleet,
    outputs_mw: &[f64],
    required_mw: f64,
    state: &mut RotationState,
) -> Result<Allocation, CurtailmentError> {
    validate_interval(fleet, outputs_mw, required_mw)?;
    let order = fleet.rotation_order();
    let n = order.len();
    let mut curtailed = vec![0.0; fleet.len()];
    let mut left = required_mw;
    for step in 0..n {
        if left <= EPSILON_MW {
            break;
        }
        let idx = order[(state.pointer + step) % n];
        let take = left.min(outputs_mw[idx]);
        curtailed[idx] = take;
        left -= take;
    }
    state.pointer = (state.pointer + 1) % n;
    Ok(Allocation {
        curtailed_mw: curtailed,
        required_mw,
    })
}

/// Proportional: each generator is curtailed in proportion to its actual
/// output, `required * output_i / sum(outputs)`.
pub fn allocate_pro_rata(
    fleet: &Fleet,
    outputs_mw: &[f64],
    required_mw: f64,
) -> Result<Allocation, CurtailmentError> {
    validate_interval(fleet, outputs_mw, required_mw)?;
    let total: f64 = outputs_mw.iter().sum();
    let curtailed = if required_mw <= EPSILON_MW || total <= EPSILON_MW {
        vec![0.0; fleet.len()]
    } else {
        outputs_mw
            .iter()
            .map(|out| required_mw * out / total)
            .collect()
    };
    Ok(Allocation {
        curtailed_mw: curtailed,
        required_mw,
    })
}

/// Quota round-robin: like rotation, but each generator only absorbs
/// curtailment up to a per-cycle MW quota equal to its rating.
///
/// Walking from the pointer, each generator takes
/// `min(remaining requirement, remaining quota, output)`; quotas deplete as
/// curtailment is absorbed and refill to the ratings once every quota is
/// exhausted. The pointer is left on the first generator (at or after the
/// last one touched) that still holds quota, so over a full cycle the
/// curtailment shares converge to the ratio of the ratings.
pub fn allocate_frr(
    fleet: &Fleet,
    outputs_mw: &[f64],
    required_mw: f64,
    state: &mut RotationState,
) -> Result<Allocation, CurtailmentError> {
    validate_interval(fleet, outputs_mw, required_mw)?;
    if state.quotas_mw.len() != fleet.len() {
        return Err(CurtailmentError::LengthMismatch {
            left: state.quotas_mw.len(),
            right: fleet.len(),
        });
    }
    let order = fleet.rotation_order();
    let n = order.len();
    let mut curtailed = vec![0.0; fleet.len()];
    let mut left = required_mw;
    if left <= EPSILON_MW {
        return Ok(Allocation {
            curtailed_mw: curtailed,
            required_mw,
        });
    }

    let exhausted =
        |quotas: &[f64]| quotas.iter().all(|q| *q <= EPSILON_MW);
    let refill = |quotas: &mut [f64]| {
        for (q, g) in quotas.iter_mut().zip(fleet.generators()) {
            *q = g.rated_mw;
        }
    };

    if exhausted(&state.quotas_mw) {
        refill(&mut state.quotas_mw);
    }

    let mut pos = state.pointer % n;
    // `quota_binding` drops when the remaining requirement cannot be
    // absorbed by generators that still hold quota (the producers have
    // spent theirs while idle generators keep theirs). The export limit is
    // hard, so in that corner the quota constraint yields: curtailment
    // continues in rotation order and quotas floor at zero.
    let mut quota_binding = true;
    let mut visited_since_progress = 0usize;
    let mut guard = 0usize;
    while left > EPSILON_MW {
        guard += 1;
        debug_assert!(guard <= 8 * n + 16, "quota walk failed to terminate");
        if guard > 8 * n + 16 {
            break;
        }
        let idx = order[pos];
        let headroom = outputs_mw[idx] - curtailed[idx];
        let take = if quota_binding {
            left.min(state.quotas_mw[idx]).min(headroom)
        } else {
            left.min(headroom)
        };
        if take > EPSILON_MW {
            curtailed[idx] += take;
            state.quotas_mw[idx] = (state.quotas_mw[idx] - take).max(0.0);
            left -= take;
            visited_since_progress = 0;
        } else {
            visited_since_progress += 1;
            if visited_since_progress > n {
                if quota_binding && exhausted(&state.quotas_mw) {
                    refill(&mut state.quotas_mw);
                } else {
                    quota_binding = false;
                }
                visited_since_progress = 0;
            }
        }
        if left > EPSILON_MW {
            pos = (pos + 1) % n;
        }
    }

    // Leave the pointer on the first generator from the stopping position
    // that still holds quota; if every quota is spent, the next event starts
    // the new cycle at the following generator.
    let mut next = (pos + 1) % n;
    for step in 0..n {
        let candidate = (pos + step) % n;
        if state.quotas_mw[order[candidate]] > EPSILON_MW {
            next = candidate;
            break;
        }
    }
    state.pointer = next;

    Ok(Allocation {
        curtailed_mw: curtailed,
        required_mw,
    })
}
