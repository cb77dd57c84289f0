//! Fixture specs (`path:5`, `z:60`, `random:30:0.2`, ...) and overrides of
//! weights, measure and potential.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use dgs_core::fixtures;
use dgs_core::rng::Lcg64;
use dgs_core::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Star(usize),
    ZSegment(usize),
    Random(usize, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSpec {
    pub family: Family,
    pub weight: Option<ValueSpec>,
    pub measure: Option<ValueSpec>,
    pub potential: Option<ValueSpec>,
    pub seed: u64,
}

fn int(s: &str, what: &str) -> Result<usize> {
    s.parse()
        .with_context(|| format!("{what} must be a non-negative integer, got `{s}`"))
}

impl FromStr for Family {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let family = match parts.as_slice() {
            ["path", n] => Family::Path(int(n, "path size")?),
            ["cycle", n] => Family::Cycle(int(n, "cycle size")?),
            ["star", n] => Family::Star(int(n, "number of leaves")?),
            ["z", r] => Family::ZSegment(int(r, "segment radius")?),
            ["random", n, p] => {
                let p: f64 = p
                    .parse()
                    .with_context(|| format!("bad edge probability `{p}`"))?;
                if !(0.0..=1.0).contains(&p) {
                    bail!("edge probability {p} outside [0, 1]");
                }
                Family::Random(int(n, "random graph size")?, p)
            }
            _ => {
                bail!("unknown fixture `{s}`; expected path:N, cycle:N, star:N, z:R or random:N:P")
            }
        };
        match family {
            Family::Path(0) | Family::Random(0, _) => bail!("fixture `{s}` has no vertices"),
            Family::Cycle(n) if n < 3 => bail!("a cycle needs at least 3 vertices"),
            _ => Ok(family),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path(n) => write!(f, "path:{n}"),
            Family::Cycle(n) => write!(f, "cycle:{n}"),
            Family::Star(n) => write!(f, "star:{n}"),
            Family::ZSegment(r) => write!(f, "z:{r}"),
            Family::Random(n, p) => write!(f, "random:{n}:{p}"),
        }
    }
}

/// A constant, or `uniform:LO:HI` drawn per entry from the seeded generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueSpec {
    Constant(f64),
    Uniform(f64, f64),
}

impl FromStr for ValueSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| anyhow!("bad number `{t}` in `{s}`"))
        };
        match s.split(':').collect::<Vec<_>>().as_slice() {
            [v] => Ok(ValueSpec::Constant(num(v)?)),
            ["uniform", lo, hi] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if !(lo <= hi) {
                    bail!("empty range in `{s}`");
                }
                Ok(ValueSpec::Uniform(lo, hi))
            }
            _ => bail!("bad value `{s}`; expected a number or uniform:LO:HI"),
        }
    }
}

impl ValueSpec {
    fn draw(&self, rng: &mut Lcg64) -> f64 {
        match *self {
            ValueSpec::Constant(v) => v,
            ValueSpec::Uniform(lo, hi) => rng.uniform(lo, hi),
        }
    }
}

impl FixtureSpec {
    pub fn build(&self) -> Result<WeightedGraph> {
        let mut g = match self.family {
            Family::Path(n) => fixtures::path(n),
            Family::Cycle(n) => fixtures::cycle(n),
            Family::Star(n) => fixtures::star(n),
            Family::ZSegment(r) => fixtures::z_segment(r),
            Family::Random(n, p) => fixtures::random_er(n, p, self.seed),
        };
        // Overrides draw from a stream independent of the graph's own.
        let mut rng = Lcg64::new(self.seed ^ 0x5deece66d);
        if let Some(spec) = self.weight {
            g = g.map_weights(|_, _, _| spec.draw(&mut rng))?;
        }
        if let Some(spec) = self.measure {
            let m = (0..g.vertex_count()).map(|_| spec.draw(&mut rng)).collect();
            g = g.with_measure(m)?;
        }
        if let Some(spec) = self.potential {
            let c = (0..g.vertex_count()).map(|_| spec.draw(&mut rng)).collect();
            g = g.with_potential(c)?;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> FixtureSpec {
        FixtureSpec {
            family: s.parse().unwrap(),
            weight: None,
            measure: None,
            potential: None,
            seed: 0,
        }
    }

    #[test]
    fn parses_families() {
        assert_eq!("path:3".parse::<Family>().unwrap(), Family::Path(3));
        assert_eq!("z:60".parse::<Family>().unwrap(), Family::ZSegment(60));
        assert_eq!(
            "random:30:0.2".parse::<Family>().unwrap(),
            Family::Random(30, 0.2)
        );
        assert!("cycle:2".parse::<Family>().is_err());
        assert!("random:5:1.5".parse::<Family>().is_err());
        assert!("blob:3".parse::<Family>().is_err());
        assert_eq!(Family::Random(30, 0.2).to_string(), "random:30:0.2");
    }

    #[test]
    fn builds_with_overrides() {
        let g = spec("star:3").build().unwrap();
        assert_eq!(g.vertex_count(), 4);
        let mut s = spec("path:4");
        s.weight = Some("2".parse().unwrap());
        s.measure = Some("uniform:0.5:2".parse().unwrap());
        let g = s.build().unwrap();
        assert!(g.edges().iter().all(|e| e.weight == 2.0));
        assert!(g.measure().iter().all(|&m| (0.5..=2.0).contains(&m)));
        assert_eq!(g, s.build().unwrap());
        s.potential = Some("-1".parse().unwrap());
        assert!(s.build().is_err());
    }
}
