//! Dense forgetting used by the property engine, where the same small
//! instances are forgotten thousands of times under varying contexts.

use super::{family_masks, OperatorKind};
use crate::bits::{self, submasks};
use crate::dense::PairSet;

fn has_least(sets: &[(u32, Vec<u32>)]) -> bool {
    sets.iter().any(|(_, cand)| {
        sets.iter()
            .all(|(_, other)| cand.iter().all(|x| other.binary_search(x).is_ok()))
    })
}

fn intersect(sets: &[(u32, Vec<u32>)]) -> Vec<u32> {
    let Some(((_, first), rest)) = sets.split_first() else {
        return Vec::new();
    };
    first
        .iter()
        .copied()
        .filter(|x| rest.iter().all(|(_, s)| s.binary_search(x).is_ok()))
        .collect()
}

/// Result models of the operator over the `n - |v|` atoms outside `v`,
/// numbered in ambient order. `kind` must be model based.
pub(crate) fn forget_dense(models: &PairSet, v: u32, kind: OperatorKind) -> PairSet {
    let n = models.n();
    let keep = bits::full(n) & !v;
    let mut out = PairSet::empty(keep.count_ones() as usize);
    for y in submasks(keep) {
        let family = family_masks(models, y, v);
        if family.is_empty() {
            continue;
        }
        let union = match kind {
            OperatorKind::Sp => false,
            OperatorKind::R => true,
            OperatorKind::M => !has_least(&family),
            OperatorKind::Closure => unreachable!("closure is not model based"),
        };
        let local_y = bits::compact(y, keep);
        if union {
            for (_, set) in &family {
                for &x in set {
                    out.insert(bits::compact(x, keep), local_y);
                }
            }
        } else {
            for x in intersect(&family) {
                out.insert(bits::compact(x, keep), local_y);
            }
        }
    }
    out
}
