//! Operator pipelines such as `"comp ecomp up"`, applied left to right.

use std::fmt;

use super::subset::{FlipMask, GroundSet, Subset};
use super::system::SetSystem;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Up,
    Down,
    Min,
    Max,
    Comp,
    Ecomp,
    Cut,
    Cocut,
    Flip(FlipMask),
}

impl Op {
    pub fn apply(&self, s: &SetSystem) -> Result<SetSystem> {
        Ok(match self {
            Op::Up => s.up_closure(),
            Op::Down => s.down_closure(),
            Op::Min => s.minimal(),
            Op::Max => s.maximal(),
            Op::Comp => s.complement(),
            Op::Ecomp => s.element_complement(),
            Op::Cut => s.cut(),
            Op::Cocut => s.cocut(),
            Op::Flip(mask) => s.apply_flip(mask)?,
        })
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Op::Up => "up",
            Op::Down => "down",
            Op::Min => "min",
            Op::Max => "max",
            Op::Comp => "comp",
            Op::Ecomp => "ecomp",
            Op::Cut => "cut",
            Op::Cocut => "cocut",
            Op::Flip(mask) => {
                let labels: Vec<String> = mask.flipped().to_one_based().iter().map(|l| l.to_string()).collect();
                return write!(f, "flip:{}", labels.join(","));
            }
        };
        f.write_str(name)
    }
}

/// Parses whitespace-separated operators; `flip:I` takes comma-separated
/// 1-based labels, each at most once.
pub fn parse_pipeline(text: &str, ground: GroundSet) -> Result<Vec<Op>> {
    let ops: Vec<Op> = text
        .split_whitespace()
        .map(|tok| parse_op(tok, ground))
        .collect::<Result<_>>()?;
    if ops.is_empty() {
        return Err(Error::Input("empty pipeline".into()));
    }
    Ok(ops)
}

fn parse_op(tok: &str, ground: GroundSet) -> Result<Op> {
    Ok(match tok {
        "up" => Op::Up,
        "down" => Op::Down,
        "min" => Op::Min,
        "max" => Op::Max,
        "comp" => Op::Comp,
        "ecomp" => Op::Ecomp,
        "cut" => Op::Cut,
        "cocut" => Op::Cocut,
        _ => {
            let rest = tok.strip_prefix("flip:").ok_or_else(|| {
                Error::Input(format!(
                    "unknown operator {tok:?}; expected up, down, min, max, comp, ecomp, cut, cocut or flip:I"
                ))
            })?;
            let mut flipped = Subset::EMPTY;
            for part in rest.split(',').filter(|p| !p.is_empty()) {
                let label: usize = part
                    .parse()
                    .map_err(|_| Error::Input(format!("flip: {part:?} is not a label")))?;
                let t = Subset::from_one_based(&[label], ground)?;
                if flipped.intersects(t) {
                    return Err(Error::Input(format!("flip: label {label} repeated")));
                }
                flipped = flipped | t;
            }
            Op::Flip(FlipMask::new(ground, flipped)?)
        }
    })
}

pub fn apply_pipeline(s: &SetSystem, ops: &[Op]) -> Result<SetSystem> {
    let mut out = s.clone();
    for op in ops {
        out = op.apply(&out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_applies() {
        let g = GroundSet::new(3).unwrap();
        let ops = parse_pipeline(" cut  flip:1,3 ecomp ", g).unwrap();
        assert_eq!(ops.len(), 3);
        assert_eq!(ops[1].to_string(), "flip:1,3");
        assert!(parse_pipeline("", g).is_err());
        assert!(parse_pipeline("up sideways", g).is_err());
        assert!(parse_pipeline("flip:4", g).is_err());
        assert!(parse_pipeline("flip:1,1", g).is_err());
        let s = SetSystem::from_labels(g, &[&[1], &[2, 3]]).unwrap();
        let cut2 = apply_pipeline(&s, &parse_pipeline("cut cut", g).unwrap()).unwrap();
        assert_eq!(cut2, s.up_closure());
    }
}
