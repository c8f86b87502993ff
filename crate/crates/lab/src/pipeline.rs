//! From a space and a scale to certified piece colorings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use treegraded::piece_coloring::{
    classify, compute_f, finish_pieces, plan_colorings, PieceColoring, PieceShape, ScaleSetup, Strategy,
    StrategyPlan,
};
use treegraded::{ChainMode, ColoringError, GradedSpace, PieceId};

use crate::error::LabError;

/// Piece families a strategy rule can target.
pub const KINDS: [&str; 5] = ["path", "tree", "cycle", "grid", "other"];

pub fn kind_of(shape: &PieceShape) -> &'static str {
    match shape {
        PieceShape::Path => "path",
        PieceShape::Tree => "tree",
        PieceShape::Cycle => "cycle",
        PieceShape::Grid(_) => "grid",
        PieceShape::Other => "other",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Width {
    Absolute(u32),
    /// A multiple of the scale `r`.
    PerScale(u32),
}

/// A strategy with a width that may scale with `r`: `band:4`, `brick:2r`,
/// `shell:1r`, `constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct StrategyRule {
    kind: RuleKind,
    width: Width,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RuleKind {
    Band,
    Shell,
    Brick,
    Constant,
}

impl StrategyRule {
    pub fn resolve(&self, r: u32) -> Strategy {
        let width = match self.width {
            Width::Absolute(w) => w,
            Width::PerScale(k) => k * r,
        };
        match self.kind {
            RuleKind::Band => Strategy::Band { width },
            RuleKind::Shell => Strategy::Shell { width },
            RuleKind::Brick => Strategy::Brick { width },
            RuleKind::Constant => Strategy::Constant,
        }
    }
}

impl FromStr for StrategyRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "constant" {
            return Ok(StrategyRule { kind: RuleKind::Constant, width: Width::Absolute(0) });
        }
        let bad = || format!("bad strategy `{s}` (expected band:W, shell:W, brick:W or constant; W may end in r)");
        let (kind, width) = s.split_once(':').ok_or_else(bad)?;
        let kind = match kind {
            "band" => RuleKind::Band,
            "shell" => RuleKind::Shell,
            "brick" => RuleKind::Brick,
            _ => return Err(bad()),
        };
        let width = match width.strip_suffix('r') {
            Some(k) => Width::PerScale(k.parse().map_err(|_| bad())?),
            None => Width::Absolute(width.parse().map_err(|_| bad())?),
        };
        if matches!(width, Width::Absolute(0) | Width::PerScale(0)) {
            return Err(bad());
        }
        Ok(StrategyRule { kind, width })
    }
}

impl fmt::Display for StrategyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            RuleKind::Band => "band",
            RuleKind::Shell => "shell",
            RuleKind::Brick => "brick",
            RuleKind::Constant => return f.write_str("constant"),
        };
        match self.width {
            Width::Absolute(w) => write!(f, "{kind}:{w}"),
            Width::PerScale(k) => write!(f, "{kind}:{k}r"),
        }
    }
}

impl TryFrom<String> for StrategyRule {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<StrategyRule> for String {
    fn from(rule: StrategyRule) -> String {
        rule.to_string()
    }
}

/// Strategy rules keyed by piece kind; unlisted kinds use the default plan.
pub type KindStrategies = BTreeMap<String, StrategyRule>;

pub fn check_kinds(rules: &KindStrategies) -> Result<(), LabError> {
    match rules.keys().find(|k| !KINDS.contains(&k.as_str())) {
        Some(k) => Err(LabError::Config(format!("unknown piece kind `{k}` (expected one of {})", KINDS.join(", ")))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Default)]
pub struct ColorRequest {
    pub r: u32,
    pub chain: Option<ChainMode>,
    pub n: Option<u32>,
    pub kinds: KindStrategies,
    /// Per-piece strategies; these win over kind rules.
    pub pieces: Vec<(PieceId, Strategy)>,
    /// Declared piece bound; computed from the piece colorings when absent.
    pub declared_f: Option<u32>,
    pub period: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Prepared {
    pub setup: ScaleSetup,
    pub pieces: Vec<PieceColoring>,
    pub strategies: Vec<Strategy>,
}

/// Chooses strategies, fixes `n` and `f(r)`, and certifies every raw piece
/// coloring against the bound.
pub fn prepare(gs: &GradedSpace, req: &ColorRequest) -> Result<Prepared, ColoringError> {
    let plan = StrategyPlan::default();
    let strategies: Vec<Strategy> = (0..gs.piece_count())
        .map(|p| {
            if let Some((_, s)) = req.pieces.iter().find(|(q, _)| *q == p) {
                return s.clone();
            }
            let shape = classify(gs, p);
            match req.kinds.get(kind_of(&shape)) {
                Some(rule) => rule.resolve(req.r),
                None => plan.choose(&shape, req.r),
            }
        })
        .collect();
    let overrides: Vec<(PieceId, Strategy)> = strategies.iter().cloned().enumerate().collect();
    let (c_primes, needed) = plan_colorings(gs, &plan, req.r, &overrides)?;
    let n = match req.n {
        Some(n) if n < needed => {
            return Err(ColoringError::Setup(format!("strategies need n >= {needed}, got n = {n}")));
        }
        Some(n) => n,
        None => needed,
    };
    let mut setup = ScaleSetup::new(req.r, n, req.chain.unwrap_or(ChainMode::Strict))?;
    match req.declared_f {
        Some(f) => setup = setup.with_f(f)?,
        None => {
            compute_f(gs, &c_primes, &mut setup);
        }
    }
    if let Some(period) = req.period {
        setup = setup.with_period(period)?;
    }
    let pieces = finish_pieces(gs, c_primes, &setup)?;
    Ok(Prepared { setup, pieces, strategies })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_round_trip() {
        for s in ["band:4", "brick:2r", "shell:1r", "constant"] {
            assert_eq!(s.parse::<StrategyRule>().unwrap().to_string(), s);
        }
        assert_eq!("brick:2r".parse::<StrategyRule>().unwrap().resolve(3), Strategy::Brick { width: 6 });
        for bad in ["band", "band:0", "stripe:2", "band:xr"] {
            assert!(bad.parse::<StrategyRule>().is_err(), "{bad}");
        }
    }
}
