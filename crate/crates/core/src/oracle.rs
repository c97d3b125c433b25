//! Exhaustive-enumeration reference optimizer for small instances. Ground
//! truth for every solver property test; no pruning, no cleverness.

use crate::model::{evaluate, slate_utility, ObjectiveMode, QueryInstance, Slate, SlateSolution};
use crate::path::{Mask, SolveError};

/// Hard cap on bidder count; the candidate count explodes combinatorially.
pub const MAX_ORACLE_N: usize = 14;

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleOptions {
    /// Include the empty slate (value 0) in the candidate set. Off by
    /// default: showing no ads is a business rule, not an optimizer output.
    pub allow_empty: bool,
}

/// Best slate by exhaustive enumeration of every strictly increasing index
/// subset of size 1..=min(n, m), restricted to mask-admissible slates when a
/// mask is given. Ties break lexicographically by slate indices.
pub fn enumerate_best(
    instance: &QueryInstance,
    mode: ObjectiveMode,
    mask: Option<&Mask>,
) -> Result<SlateSolution, SolveError> {
    enumerate_best_with(instance, mode, mask, OracleOptions::default())
}

pub fn enumerate_best_with(
    instance: &QueryInstance,
    mode: ObjectiveMode,
    mask: Option<&Mask>,
    options: OracleOptions,
) -> Result<SlateSolution, SolveError> {
    instance.check_mode(mode)?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    if options.allow_empty && mask.map_or(true, |m| m.mandatory_ranks().is_empty()) {
        best = Some((Vec::new(), 0.0));
    }
    for_each_admissible(instance, mask, |ranks| {
        let slate = Slate::new(ranks.to_vec(), instance).expect("enumerated slate is valid");
        let value = slate_utility(instance, &slate, mode).expect("mode checked above");
        // Enumeration is in lexicographic order, so strict improvement keeps
        // the lexicographically smallest optimum.
        if best.as_ref().map_or(true, |(_, b)| value > *b) {
            best = Some((ranks.to_vec(), value));
        }
    })?;
    let (ranks, _) = best.ok_or(SolveError::SinkUnreachable)?;
    let slate = Slate::new(ranks, instance)?;
    Ok(evaluate(instance, &slate, mode)?)
}

/// Every optimal slate, where "optimal" admits a 1e-12 relative tie band
/// around the maximum. Used by argmax-invariance tests.
pub fn enumerate_optima(
    instance: &QueryInstance,
    mode: ObjectiveMode,
    mask: Option<&Mask>,
) -> Result<Vec<Slate>, SolveError> {
    instance.check_mode(mode)?;
    let mut evaluated: Vec<(Vec<usize>, f64)> = Vec::new();
    for_each_admissible(instance, mask, |ranks| {
        let slate = Slate::new(ranks.to_vec(), instance).expect("enumerated slate is valid");
        let value = slate_utility(instance, &slate, mode).expect("mode checked above");
        evaluated.push((ranks.to_vec(), value));
    })?;
    let best = evaluated
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return Err(SolveError::SinkUnreachable);
    }
    let cut = best - 1e-12 * best.abs().max(1.0);
    Ok(evaluated
        .into_iter()
        .filter(|&(_, v)| v >= cut)
        .map(|(ranks, _)| Slate::new(ranks, instance).expect("valid"))
        .collect())
}

/// All mask-admissible nonempty slates, lexicographically ordered. Used by
/// the full-column-enumeration LP oracle.
pub fn admissible_slates(
    instance: &QueryInstance,
    mask: Option<&Mask>,
) -> Result<Vec<Slate>, SolveError> {
    let mut out = Vec::new();
    for_each_admissible(instance, mask, |ranks| {
        out.push(Slate::new(ranks.to_vec(), instance).expect("valid"));
    })?;
    Ok(out)
}

/// Visits every admissible nonempty slate in lexicographic order.
///
/// Admissibility under a mask: a slate can be produced by the arc-filter
/// rules iff it skips or omits no mandatory (zero-bit) ad, i.e. it contains
/// every mandatory rank. Infeasible when more ads are mandatory than
/// positions exist.
fn for_each_admissible<F: FnMut(&[usize])>(
    instance: &QueryInstance,
    mask: Option<&Mask>,
    mut visit: F,
) -> Result<(), SolveError> {
    if instance.n() > MAX_ORACLE_N {
        return Err(SolveError::InstanceTooLarge {
            n: instance.n(),
            cap: MAX_ORACLE_N,
        });
    }
    if let Some(m) = mask {
        m.check_length(instance.n())?;
    }
    let mandatory: Vec<usize> = mask.map_or(Vec::new(), |m| m.mandatory_ranks());
    if mandatory.len() > instance.positions() {
        return Err(SolveError::SinkUnreachable);
    }
    let n = instance.n();
    let cap = instance.positions().min(n);
    let mut stack: Vec<usize> = Vec::with_capacity(cap);
    let mut any = false;
    // Depth-first in ascending rank order = lexicographic slate order.
    fn recurse<F: FnMut(&[usize])>(
        n: usize,
        cap: usize,
        start: usize,
        stack: &mut Vec<usize>,
        mandatory: &[usize],
        any: &mut bool,
        visit: &mut F,
    ) {
        for j in start..=n {
            stack.push(j);
            if stack.len() <= cap && includes_all(stack, mandatory) {
                *any = true;
                visit(stack);
            }
            if stack.len() < cap {
                recurse(n, cap, j + 1, stack, mandatory, any, visit);
            }
            stack.pop();
        }
    }
    recurse(n, cap, 1, &mut stack, &mandatory, &mut any, &mut visit);
    if !any {
        return Err(SolveError::SinkUnreachable);
    }
    Ok(())
}

fn includes_all(slate: &[usize], mandatory: &[usize]) -> bool {
    mandatory.iter().all(|z| slate.contains(z))
}
