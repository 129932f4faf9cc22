use std::process::ExitCode;

use anyhow::{bail, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tomoctx::contextuality::{
    dichotomic_from, entropic_chain, joint_from_projectors_via, kcbs_dichotomic, kcbs_means, ncycle_bounds,
    ncycle_value, pentagram_value_mixed, peres_mermin, InequalityReport, ProbabilityRoute,
};
use tomoctx::qcore::{projector_from, random_density};
use tomoctx::scenarios::{
    kcbs_scenario, sphere_point, symmetric_ncycle_directions, zero_projection_state, KCBS_PHI, KCBS_THETA,
};
use tomoctx::{ComplexMatrix, GridSpec, StateVector};

use super::load_density;
use crate::output::write_json;
use crate::{Family, InequalityArgs, Route};

pub fn probability_route(route: Route, grid: GridSpec) -> ProbabilityRoute {
    match route {
        Route::Direct => ProbabilityRoute::Direct,
        Route::Tomographic => ProbabilityRoute::Tomographic(grid),
        Route::Fidelity => ProbabilityRoute::Fidelity(grid),
    }
}

/// Entropic chain report for the KCBS vectors at (θ, φ).
pub fn entropic_report(theta: f64, phi: f64, route: ProbabilityRoute) -> Result<InequalityReport> {
    let sc = kcbs_scenario(theta, phi)?;
    let mut joints = Vec::with_capacity(5);
    for i in 0..5 {
        joints.push(joint_from_projectors_via(&sc.a[i], &sc.a[(i + 1) % 5], &sc.psi, route)?);
    }
    Ok(entropic_chain(&joints)?)
}

fn state_or_direction(args: &InequalityArgs, along: impl Fn([f64; 3]) -> Result<StateVector>) -> Result<ComplexMatrix> {
    match args.state.as_deref() {
        Some("random") => bail!("--state random is only available for peres-mermin"),
        Some(path) => load_density(path.as_ref()),
        None => {
            let n = sphere_point(args.theta.unwrap_or(0.0), args.phi.unwrap_or(0.0));
            Ok(projector_from(&along(n)?))
        }
    }
}

pub fn run(args: &InequalityArgs) -> Result<ExitCode> {
    if args.bounds_only && args.family != Family::Ncycle {
        bail!("--bounds-only applies to the ncycle family");
    }
    let out = args.output.as_deref();
    let theta = args.theta.unwrap_or(KCBS_THETA);
    let phi = args.phi.unwrap_or(KCBS_PHI);
    let report = match args.family {
        Family::Kcbs => {
            let sc = kcbs_scenario(theta, phi)?;
            kcbs_dichotomic(&kcbs_means(&sc.a, &sc.psi)?)?
        }
        Family::Entropic => entropic_report(theta, phi, probability_route(args.route, args.grid.spec()?))?,
        Family::Pentagram => {
            let dirs: [[f64; 3]; 5] = symmetric_ncycle_directions(5)?.try_into().expect("five directions");
            let rho = state_or_direction(args, |n| Ok(zero_projection_state(n)?))?;
            pentagram_value_mixed(&dirs, &rho)?
        }
        Family::Ncycle => {
            if args.bounds_only {
                write_json(out, &ncycle_bounds(args.n)?)?;
                return Ok(ExitCode::SUCCESS);
            }
            if args.n.is_multiple_of(2) {
                bail!("the symmetric cyclic configuration needs odd n; use --bounds-only for even n");
            }
            let mut obs = Vec::with_capacity(args.n);
            for d in symmetric_ncycle_directions(args.n)? {
                obs.push(dichotomic_from(&StateVector::from_real(&d)?));
            }
            let rho = state_or_direction(args, |n| Ok(StateVector::from_real(&n)?))?;
            ncycle_value(&obs, &rho)?
        }
        Family::PeresMermin => {
            let rho = match args.state.as_deref() {
                None | Some("random") => random_density(4, &mut ChaCha8Rng::seed_from_u64(args.seed)),
                Some(path) => load_density(path.as_ref())?,
            };
            peres_mermin(&rho)?
        }
    };
    write_json(out, &report)?;
    Ok(ExitCode::SUCCESS)
}
