use std::ops::RangeInclusive;

/// Operators that can appear in a composed chain, for truncation
/// bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainOp {
    B,
    BBar,
    T,
    L,
    Delta0,
    Box,
    BoxBar,
    DelB,
    DelBarB,
    DelBStar,
    DelBarBStar,
    D,
    DStar,
    Hodge0,
    Hodge1,
}

impl ChainOp {
    /// Levels the operator can climb in one application.
    pub fn raise(self) -> usize {
        match self {
            ChainOp::T | ChainOp::L | ChainOp::Delta0 | ChainOp::Box | ChainOp::BoxBar | ChainOp::Hodge0 => 0,
            _ => 1,
        }
    }
}

/// Fock levels on which the composition of `chain` (applied to scalar
/// coefficients) never touches the truncation at `fock_max`.
pub fn safe_band(chain: &[ChainOp], fock_max: usize) -> RangeInclusive<usize> {
    let raise: usize = chain.iter().map(|op| op.raise()).sum();
    match fock_max.checked_sub(raise) {
        Some(top) => 0..=top,
        #[allow(clippy::reversed_empty_ranges)]
        None => 1..=0,
    }
}
