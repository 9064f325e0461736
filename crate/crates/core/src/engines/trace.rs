use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::canon::Colour;
use crate::error::Result;

/// Multiset of colours, as `(colour, count)` sorted by colour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Histogram(pub Vec<(Colour, usize)>);

impl Histogram {
    pub fn of(colours: &[Colour]) -> Histogram {
        let mut m: BTreeMap<Colour, usize> = BTreeMap::new();
        for &c in colours {
            *m.entry(c).or_default() += 1;
        }
        Histogram(m.into_iter().collect())
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|(_, n)| n).sum()
    }
}

/// Per-node colours on the disjoint union of two graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    pub colours: Vec<Colour>,
    pub n1: usize,
}

impl Colouring {
    pub fn first(&self) -> &[Colour] {
        &self.colours[..self.n1]
    }

    pub fn second(&self) -> &[Colour] {
        &self.colours[self.n1..]
    }

    pub fn histograms(&self) -> (Histogram, Histogram) {
        (Histogram::of(self.first()), Histogram::of(self.second()))
    }

    pub fn class_count(&self) -> usize {
        let mut c = self.colours.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub histogram_1: Histogram,
    pub histogram_2: Histogram,
    pub class_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    HistogramsDiffer,
    PartitionStable,
    MaxIters,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementTrace {
    pub iterations: Vec<IterationRecord>,
    pub termination: Termination,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Histograms first differed at this iteration (0 = initial colours).
    Distinguished { iteration: usize },
    /// No difference found. `stable` reports whether the last iteration left
    /// the joint partition unchanged.
    Indistinguishable { iterations_run: usize, stable: bool },
}

impl Verdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, Verdict::Distinguished { .. })
    }

    pub fn iteration(&self) -> Option<usize> {
        match self {
            Verdict::Distinguished { iteration } => Some(*iteration),
            Verdict::Indistinguishable { .. } => None,
        }
    }
}

/// Drives joint refinement: records iteration 0 from `initial`, then calls
/// `step` with the previous colouring for `t = 1..=max_iters`.
pub(crate) fn drive<F>(
    n1: usize,
    initial: Vec<Colour>,
    max_iters: usize,
    stop_on_stable: bool,
    mut step: F,
) -> Result<(Verdict, RefinementTrace)>
where
    F: FnMut(usize, &[Colour]) -> Result<Vec<Colour>>,
{
    let mut current = Colouring {
        colours: initial,
        n1,
    };
    let mut iterations = Vec::new();
    let record = |t: usize, c: &Colouring, out: &mut Vec<IterationRecord>| {
        let (h1, h2) = c.histograms();
        let differ = h1 != h2;
        out.push(IterationRecord {
            iteration: t,
            histogram_1: h1,
            histogram_2: h2,
            class_count: c.class_count(),
        });
        differ
    };
    if record(0, &current, &mut iterations) {
        return Ok((
            Verdict::Distinguished { iteration: 0 },
            RefinementTrace {
                iterations,
                termination: Termination::HistogramsDiffer,
            },
        ));
    }
    let mut stable = false;
    for t in 1..=max_iters {
        let next = Colouring {
            colours: step(t, &current.colours)?,
            n1,
        };
        let prev_classes = current.class_count();
        let differ = record(t, &next, &mut iterations);
        if differ {
            return Ok((
                Verdict::Distinguished { iteration: t },
                RefinementTrace {
                    iterations,
                    termination: Termination::HistogramsDiffer,
                },
            ));
        }
        stable = next.class_count() == prev_classes;
        current = next;
        if stable && stop_on_stable {
            return Ok((
                Verdict::Indistinguishable {
                    iterations_run: t,
                    stable,
                },
                RefinementTrace {
                    iterations,
                    termination: Termination::PartitionStable,
                },
            ));
        }
    }
    Ok((
        Verdict::Indistinguishable {
            iterations_run: max_iters,
            stable,
        },
        RefinementTrace {
            iterations,
            termination: Termination::MaxIters,
        },
    ))
}
