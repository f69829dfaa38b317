//! The four subcommands. Each returns the process exit code or a `CliError`
//! whose `exit_code` the binary uses.

use std::fmt::Write as _;
use std::path::Path;

use phlo_core::exterior::star_table;
use phlo_core::field::{build_null_frame, phase_jet};
use phlo_core::frobenius::curvature_r;
use phlo_core::numerics::Axis;
use phlo_core::solutions::{action_integral, build_solution};
use phlo_core::strain::bridge_signs;
use phlo_core::stress_energy::energy_tensor_frame;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::Report;

pub const SAMPLE_HEADER: &str = "x,y,z,xi,u,p,phi2,psi,R,energy_density";

/// Runs the selected suites and returns the assembled report.
pub fn build_report(cfg: &RunConfig) -> Report {
    let signs = bridge_signs();
    let sections: std::collections::BTreeMap<_, _> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .suites
            .iter()
            .map(|&suite| (suite, s.spawn(move || suite.run(cfg))))
            .collect();
        handles
            .into_iter()
            .map(|(suite, h)| (suite.name().to_string(), h.join().expect("suite thread panicked")))
            .collect()
    });
    Report {
        tool: "phlo",
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        config_hash: cfg.config_hash.clone(),
        bridge_signs: signs.entries().iter().map(|&(n, s)| (n, s.value() as i8)).collect(),
        passed: sections.values().all(|s: &crate::report::Section| s.passed),
        sections,
    }
}

/// `verify`: writes the JSON report to `report` (or the configured path, or
/// stdout) and returns 0 when every check passes.
pub fn verify(config: &Path, report: Option<&Path>, seed: Option<u64>) -> Result<u8, CliError> {
    let mut cfg = RunConfig::load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let rep = build_report(&cfg);
    let json = rep.to_json();
    match report.or(cfg.report.as_deref()) {
        Some(path) => std::fs::write(path, &json).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{json}"),
    }
    for f in rep.failures() {
        eprintln!("FAIL {f}");
    }
    Ok(if rep.passed { 0 } else { 1 })
}

/// Parses `nx,ny,nz` with every count at least 1.
pub fn parse_grid(s: &str) -> Result<[usize; 3], CliError> {
    let parts: Vec<_> = s.split(',').map(str::trim).collect();
    let bad = || CliError::Config(format!("grid must be nx,ny,nz with positive counts, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0usize; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| bad())?;
        if *o == 0 {
            return Err(bad());
        }
    }
    Ok(out)
}

/// Evenly spaced nodes spanning `[lo, hi]`; a single node sits at the centre.
fn nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let axis = Axis::new(lo, hi, n);
    (0..n).map(|i| axis.node(i)).collect()
}

/// Shortest round-trip form, with `-0` folded into `0`.
fn num(v: f64) -> String {
    format!("{:e}", v + 0.0)
}

/// `sample`: one CSV row per grid point over the support box at `xi`, `z`
/// outermost and `x` innermost.
pub fn sample(config: &Path, grid: [usize; 3], xi: f64, out: &Path) -> Result<u8, CliError> {
    let cfg = RunConfig::load(config)?;
    if !xi.is_finite() {
        return Err(CliError::Config(format!("xi must be finite, got {xi}")));
    }
    let sol = build_solution(&cfg.solution)?;
    let (lo, hi) = sol
        .support_box(xi)
        .ok_or_else(|| CliError::Config("amplitude has unbounded support".into()))?;
    let axes: Vec<Vec<f64>> = (0..3).map(|i| nodes(lo[i], hi[i], grid[i])).collect();
    let floor = cfg.solution.tolerances.phase_floor;

    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", out.display()));
    let mut w = csv::Writer::from_path(out).map_err(io)?;
    w.write_record(SAMPLE_HEADER.split(',')).map_err(io)?;
    for &z in &axes[2] {
        for &y in &axes[1] {
            for &x in &axes[0] {
                let pt = [x, y, z, xi];
                let (u, p) = sol.pair.jets(&pt);
                let phi2 = u.value * u.value + p.value * p.value;
                let psi = phase_jet(&u, &p, floor).map(|j| j.value);
                let r = curvature_r(&sol.pair, &pt, floor).r;
                let density = build_null_frame(&sol.pair, &pt)
                    .map(|f| energy_tensor_frame(&f).energy_density())
                    .unwrap_or(f64::NAN);
                let mut row: Vec<String> = [x, y, z, xi, u.value, p.value, phi2].map(num).into();
                row.push(psi.map(num).unwrap_or_default());
                row.push(num(r));
                row.push(num(density));
                w.write_record(&row).map_err(io)?;
            }
        }
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    Ok(0)
}

/// `energy`: prints the key-value block and returns 0 when the action ratio
/// matches `εκ` within the quadrature tolerance.
pub fn energy(config: &Path) -> Result<(u8, String), CliError> {
    let cfg = RunConfig::load(config)?;
    let sol = build_solution(&cfg.solution)?;
    let a = action_integral(&sol)?;
    let tol = cfg.solution.tolerances.quadrature_rel_tol;
    let mut out = String::new();
    let kv = |out: &mut String, k: &str, v: String| {
        let _ = writeln!(out, "{k:<15} = {v}");
    };
    kv(&mut out, "E", format!("{:.12e}", a.energy.value));
    kv(&mut out, "E_error", format!("{:.3e}", a.energy.error));
    kv(&mut out, "T", format!("{:.12e}", a.period));
    kv(&mut out, "nu", format!("{:.12e}", cfg.solution.frequency()));
    kv(&mut out, "action", format!("{:.12e}", a.action));
    kv(&mut out, "action_error", format!("{:.3e}", a.action_error));
    kv(&mut out, "action_dual", format!("{:.12e}", a.action_dual));
    kv(&mut out, "expected_ratio", format!("{:+}", a.expected_sign));
    let code = match a.ratio {
        Some(r) => {
            let dev = (r - a.expected_sign).abs();
            kv(&mut out, "ratio", format!("{r:.12e}"));
            kv(&mut out, "ratio_deviation", format!("{dev:.3e}"));
            kv(&mut out, "tolerance", format!("{tol:e}"));
            let ok = dev < tol;
            kv(&mut out, "status", if ok { "pass" } else { "fail" }.into());
            if ok {
                0
            } else {
                1
            }
        }
        None => {
            kv(&mut out, "ratio", "undefined (E T = 0)".into());
            kv(&mut out, "status", "fail".into());
            1
        }
    };
    Ok((code, out))
}

pub fn star_table_text() -> String {
    star_table().render()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("3, 4,5").unwrap(), [3, 4, 5]);
        assert!(parse_grid("3,4").is_err());
        assert!(parse_grid("3,0,1").is_err());
        assert!(parse_grid("a,b,c").is_err());
    }

    #[test]
    fn single_node_sits_at_centre() {
        assert_eq!(nodes(-1.0, 3.0, 1), vec![1.0]);
        assert_eq!(nodes(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn star_table_has_sixteen_lines() {
        let t = star_table_text();
        assert_eq!(t.lines().count(), 16);
        assert!(t.lines().any(|l| l == "2 (1,2) -> - (3,4)"), "{t}");
    }
}
