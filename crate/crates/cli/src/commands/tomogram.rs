use std::f64::consts::{PI, TAU};
use std::process::ExitCode;

use anyhow::{bail, Result};
use tomoctx::qcore::ComplexMatrix;
use tomoctx::scenarios::scenario_unitaries;
use tomoctx::tomography::{rotated_tomogram, tomogram_of, Tomogram};
use tomoctx::TwiceJ;

use super::{load_operator, m_label, parse_spin};
use crate::output::{Csv, Field};
use crate::{Scenario, TomogramArgs};

/// α uniform on [0, 2π), β uniform on [0, π] with both ends.
pub fn sample_angles(n_alpha: usize, n_beta: usize) -> Vec<(f64, f64)> {
    let betas: Vec<f64> = if n_beta == 1 {
        vec![0.0]
    } else {
        (0..n_beta).map(|k| PI * k as f64 / (n_beta - 1) as f64).collect()
    };
    (0..n_alpha)
        .flat_map(|i| {
            let a = TAU * i as f64 / n_alpha as f64;
            betas.iter().map(move |&b| (a, b))
        })
        .collect()
}

fn kcbs_tomograms(theta: f64, phi: f64) -> Result<Vec<(String, Tomogram)>> {
    let us = scenario_unitaries(theta, phi)?;
    let mut out = Vec::new();
    for (k, u) in us.projector_unitaries() {
        out.push((k.to_string(), rotated_tomogram(u, TwiceJ::ONE)?));
    }
    out.insert(
        2,
        (
            "3".to_string(),
            rotated_tomogram(&ComplexMatrix::identity(3), TwiceJ::ONE)?,
        ),
    );
    out.push(("psi".to_string(), rotated_tomogram(&us.u_psi, TwiceJ::ONE)?));
    Ok(out)
}

pub fn run(args: &TomogramArgs) -> Result<ExitCode> {
    let toms = match (args.scenario, &args.operator) {
        (Some(Scenario::Kcbs), _) => {
            if let Some(j) = &args.j {
                if parse_spin(j)? != TwiceJ::ONE {
                    bail!("the kcbs scenario is spin 1");
                }
            }
            kcbs_tomograms(args.theta, args.phi)?
        }
        (Some(Scenario::PeresMermin), _) => {
            bail!("peres-mermin is a two-qubit scenario and has no spin tomogram")
        }
        (None, Some(path)) => {
            let op = load_operator(path)?;
            let j = match &args.j {
                Some(s) => parse_spin(s)?,
                None => TwiceJ::from_dim(op.dim())?,
            };
            vec![("op".to_string(), tomogram_of(&op, j)?)]
        }
        (None, None) => bail!("either --scenario or --operator is required"),
    };
    let grid = args.grid.spec()?;
    let angles = sample_angles(grid.n_alpha, grid.n_beta);
    let path = args.output.as_deref();
    if args.simplex {
        if toms.iter().any(|(_, t)| t.j() != TwiceJ::ONE) {
            bail!("--simplex needs a spin-1 tomogram");
        }
        let mut csv = Csv::create(path, &["k", "w1", "w0", "wm1"])?;
        for (k, tom) in &toms {
            for &(a, b) in &angles {
                let w = tom.distribution(a, b)?;
                csv.row(&[Field::Text(k), Field::Num(w[0]), Field::Num(w[1]), Field::Num(w[2])])?;
            }
        }
        csv.finish()?;
    } else {
        let mut csv = Csv::create(path, &["k", "m", "alpha", "beta", "omega"])?;
        for (k, tom) in &toms {
            for &(a, b) in &angles {
                for m in tom.j().magnetic() {
                    csv.row(&[
                        Field::Text(k),
                        Field::Text(&m_label(m)),
                        Field::Num(a),
                        Field::Num(b),
                        Field::Num(tom.eval(m, a, b)),
                    ])?;
                }
            }
        }
        csv.finish()?;
    }
    Ok(ExitCode::SUCCESS)
}
