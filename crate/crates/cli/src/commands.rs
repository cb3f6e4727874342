use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use rtrace::chain::{rt_via_traces_with, ChainData};
use rtrace::circle::{
    average_rt, chain_data_of, change_of_lift_check, local_axioms_check, q, split_rt_check, ArcRegion, LinearCircleMap, Method,
    PlCircleMap, Q,
};
use rtrace::group::{FreeGroup, SemidirectElement};
use rtrace::{ClassSum, Relation, RtReport};

use crate::{CheckKind, Command, ExampleKind, LinearArgs, OutArgs, RtInput};

const IDENTITY_FAILED: u8 = 3;

pub fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Rt { input } => rt(input),
        Command::Check { which } => check(which),
        Command::Grid { n_max, d_max, method } => grid(n_max, d_max, method.into()),
        Command::Chain { file } => {
            let map = read_map(&file)?;
            println!("{}", chain_data_of(&map)?.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Example { which } => {
            let map = PlCircleMap::perturbed_degree_five();
            match which {
                ExampleKind::Map => println!("{}", map.to_json()),
                ExampleKind::Chain => println!("{}", chain_data_of(&map)?.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn linear(args: &LinearArgs) -> Result<LinearCircleMap> {
    Ok(LinearCircleMap::new(args.n, args.d)?)
}

fn read_map(path: &Path) -> Result<PlCircleMap> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PlCircleMap::from_json(&s).with_context(|| format!("in map file {}", path.display()))
}

fn parse_q(s: &str) -> Result<Q> {
    s.trim().parse::<Q>().map_err(|_| anyhow::anyhow!("not a rational number: {s:?}"))
}

/// `s1:e1,s2:e2,…`
fn parse_arcs(spec: Option<&str>) -> Result<ArcRegion> {
    let Some(spec) = spec else {
        return Ok(ArcRegion::Whole);
    };
    let mut arcs = Vec::new();
    for part in spec.split(',') {
        let (s, e) = part
            .split_once(':')
            .with_context(|| format!("arc {part:?} should look like start:end"))?;
        arcs.push((parse_q(s)?, parse_q(e)?));
    }
    Ok(ArcRegion::arcs(arcs)?)
}

fn emit(report: &RtReport, out: &OutArgs) {
    if out.json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable"));
    } else {
        println!("{}", report.render());
    }
}

fn rt(input: RtInput) -> Result<ExitCode> {
    let cyclic = FreeGroup::CYCLIC;
    match input {
        RtInput::Linear { map, method, out } => {
            let rt = linear(&map)?.rt(method.into())?;
            emit(&RtReport::new(cyclic, rt), &out);
        }
        RtInput::Pl {
            file,
            method,
            nudge,
            arcs,
            out,
        } => {
            let mut map = read_map(&file)?;
            if let Some(eps) = nudge {
                map = map.nudged(&parse_q(&eps)?);
            }
            let region = parse_arcs(arcs.as_deref())?;
            let rt = match (method.into(), &region) {
                (_, ArcRegion::Arcs(_)) | (Method::Geometric, _) => rtrace::circle::geometric_rt(&map, &region)?,
                (m, ArcRegion::Whole) => map.rt(m)?,
            };
            emit(&RtReport::new(cyclic, rt), &out);
        }
        RtInput::Chain { file, bound, out } => {
            let s = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let c = ChainData::from_json(&s).with_context(|| format!("in chain file {}", file.display()))?;
            let report = rtrace::validate_chain(&c);
            if !report.passed() {
                for issue in &report.issues {
                    eprintln!("{issue}");
                }
                bail!("chain data in {} is inconsistent", file.display());
            }
            let mut rel = Relation::new(c.hom.clone());
            if let Some(b) = bound {
                rel = rel.with_bound(b);
            }
            let res = rt_via_traces_with(&c, &rel)?;
            emit(&RtReport::new(c.hom.group(), res.rt), &out);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verdict(holds: bool) -> ExitCode {
    if holds {
        println!("ok");
        ExitCode::SUCCESS
    } else {
        println!("FAILED");
        ExitCode::from(IDENTITY_FAILED)
    }
}

fn show(label: &str, s: &ClassSum) {
    println!("{label:<10} {}", s.render(&FreeGroup::CYCLIC));
}

fn pl_for_geometry(l: &LinearCircleMap) -> PlCircleMap {
    let pl = l.to_pl();
    if l.d == l.n as i64 {
        pl.nudged(&q(1, 2 * l.n as i64))
    } else {
        pl
    }
}

fn check(which: CheckKind) -> Result<ExitCode> {
    match which {
        CheckKind::Oracle { map } => {
            let l = linear(&map)?;
            let closed = l.rt(Method::Closed)?;
            let geometric = l.rt(Method::Geometric)?;
            let trace = l.rt(Method::Trace)?;
            show("closed", &closed);
            show("geometric", &geometric);
            show("trace", &trace);
            Ok(verdict(closed == geometric && geometric == trace))
        }
        CheckKind::Averaging { map, cover, arcs } => {
            let l = linear(&map)?;
            let region = parse_arcs(arcs.as_deref())?;
            let r = average_rt(&pl_for_geometry(&l), cover, &region)?;
            show("m*RT", &r.downstairs.scale(&cover.into()));
            for (c, s) in r.cosets.iter().enumerate() {
                show(&format!("coset {c}"), s);
            }
            show("sum", &r.pushed);
            println!("lifts to the cover: {}", r.lifted);
            Ok(verdict(r.holds))
        }
        CheckKind::Splitting { file } => {
            let map = match file {
                Some(f) => read_map(&f)?,
                None => PlCircleMap::new(vec![
                    vec![(q(0, 1), q(0, 1)), (q(1, 1), q(2, 1))],
                    vec![(q(0, 1), q(1, 2)), (q(1, 1), q(5, 2))],
                ])?,
            };
            let branches = (1..=map.n()).map(|k| map.branch_map(k)).collect::<rtrace::Result<Vec<_>>>()?;
            let r = split_rt_check(&branches, &ArcRegion::Whole)?;
            show("RT", &r.combined);
            for (k, s) in r.pieces.iter().enumerate() {
                show(&format!("branch {}", k + 1), s);
            }
            show("sum", &r.embedded);
            Ok(verdict(r.holds))
        }
        CheckKind::Lift { map, phi } => {
            let l = linear(&map)?;
            let phi = SemidirectElement::parse(&FreeGroup::CYCLIC, &phi)?;
            let r = change_of_lift_check(&pl_for_geometry(&l), &phi, &ArcRegion::Whole)?;
            show("RT", &r.original);
            show("relifted", &r.relifted);
            show("mu", &r.transported);
            if !r.hom_matches {
                println!("relifted map does not induce the conjugate homomorphism");
            }
            Ok(verdict(r.holds))
        }
        CheckKind::Local { map } => {
            let l = linear(&map)?;
            let r = local_axioms_check(&pl_for_geometry(&l))?;
            println!("fixed points   {}", r.fixed_points);
            println!("isolated       {}", r.isolated);
            println!("reconstruction {}", r.reconstruction);
            println!("excision       {}", r.excision);
            println!("additivity     {}", r.additivity);
            println!("empty region   {}", r.empty_region);
            Ok(verdict(r.holds()))
        }
    }
}

fn grid(n_max: usize, d_max: i64, method: Method) -> Result<ExitCode> {
    if n_max == 0 {
        bail!("--n-max must be at least 1");
    }
    println!("n,d,L,N,exact");
    for n in 1..=n_max {
        for d in -d_max..=d_max {
            let rt = LinearCircleMap::new(n, d)?.rt(method)?;
            let r = RtReport::new(FreeGroup::CYCLIC, rt);
            println!("{n},{d},{},{},{}", r.lefschetz, r.nielsen_lower, r.exact);
        }
    }
    Ok(ExitCode::SUCCESS)
}
