use std::f64::consts::PI;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use tomoctx::contextuality::ProbabilityRoute;
use tomoctx::scenarios::kcbs_scenario;
use tomoctx::search::{maximize, ScanPoint, SearchConfig};
use tomoctx::tomography::{unitary_tomogram, U3Params};

use super::inequality::entropic_report;
use super::parse_number;
use crate::output::{write_json, Csv, Field};
use crate::{ScanArgs, ScanFamily};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Axis> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            bail!("axis {s:?} is not lo:hi:n");
        };
        let axis = Axis {
            lo: parse_number(lo)?,
            hi: parse_number(hi)?,
            n: n.parse().with_context(|| format!("axis {s:?}: bad point count"))?,
        };
        if axis.n == 0 || !axis.lo.is_finite() || !axis.hi.is_finite() || axis.hi < axis.lo {
            bail!("axis {s:?}: need finite lo <= hi and n >= 1");
        }
        if axis.n > 1 && axis.hi == axis.lo {
            bail!("axis {s:?}: empty range with {} points", axis.n);
        }
        Ok(axis)
    }

    /// n points from lo to hi inclusive; a single point sits at lo.
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| {
                if i == self.n - 1 {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
                }
            })
            .collect()
    }
}

fn axes(args: &ScanArgs, defaults: [(f64, f64); 2]) -> Result<[Axis; 2]> {
    match args.axes.len() {
        0 => Ok(defaults.map(|(lo, hi)| Axis {
            lo,
            hi,
            n: args.resolution,
        })),
        2 => Ok([Axis::parse(&args.axes[0])?, Axis::parse(&args.axes[1])?]),
        k => bail!("expected two --axis specs, got {k}"),
    }
}

#[derive(Serialize)]
struct MaximumReport {
    argmax: Vec<f64>,
    value: f64,
    grid_best: ScanPoint,
}

pub fn run(args: &ScanArgs) -> Result<ExitCode> {
    let path = args.output.as_deref();
    match args.family {
        ScanFamily::UnitaryTomogram => {
            if args.maximize {
                bail!("--maximize applies to the entropic scan");
            }
            let [a1, a2] = axes(args, [(0.0, PI / 2.0), (0.0, PI / 2.0)])?;
            let mut csv = Csv::create(path, &["theta1", "theta2", "w1", "w0", "wm1"])?;
            for t1 in a1.points() {
                for t2 in a2.points() {
                    let w = unitary_tomogram(&U3Params::new([t1, t2, 0.0], [0.0; 6])?);
                    csv.row(&[
                        Field::Num(t1),
                        Field::Num(t2),
                        Field::Num(w[0]),
                        Field::Num(w[1]),
                        Field::Num(w[2]),
                    ])?;
                }
            }
            csv.finish()?;
        }
        ScanFamily::Entropic => {
            if args.maximize && path.is_none() {
                bail!("--maximize prints JSON on stdout; send the table to --output");
            }
            let [at, ap] = axes(args, [(0.0, PI / 2.0), (0.0, PI / 4.0)])?;
            let mut csv = Csv::create(
                path,
                &["theta", "phi", "value", "violated", "p1", "p2", "p3", "p4", "p5"],
            )?;
            for t in at.points() {
                for p in ap.points() {
                    let report = entropic_report(t, p, ProbabilityRoute::Direct)?;
                    let probs = kcbs_scenario(t, p)?.probabilities();
                    let mut row = vec![
                        Field::Num(t),
                        Field::Num(p),
                        Field::Num(report.value),
                        Field::Int(i64::from(report.violated)),
                    ];
                    row.extend(probs.iter().map(|&x| Field::Num(x)));
                    csv.row(&row)?;
                }
            }
            csv.finish()?;
            if args.maximize {
                let objective = |x: &[f64]| {
                    entropic_report(x[0], x[1], ProbabilityRoute::Direct)
                        .map(|r| r.value)
                        .unwrap_or(f64::NAN)
                };
                let cfg = SearchConfig {
                    grid_resolution: at.n.max(ap.n).clamp(2, 60),
                    seed: args.seed,
                    ..Default::default()
                };
                let r = maximize(objective, &[(at.lo, at.hi), (ap.lo, ap.hi)], &cfg)?;
                write_json(
                    None,
                    &MaximumReport {
                        argmax: r.argmax,
                        value: r.value,
                        grid_best: r.grid_best,
                    },
                )?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
