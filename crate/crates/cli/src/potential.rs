//! Potential input: an inline cosine series or a sampled `s,phi` file.

use std::f64::consts::PI;
use std::path::Path;

use magring::circle::Grid;
use magring::RealFunction;

use crate::error::{CliError, CliResult};

/// `Σ c_k cos(ks)` from `"c0,c1,..."`, sampled on `n` nodes.
pub fn from_cosine_series(spec: &str, n: usize) -> CliResult<RealFunction> {
    let coeffs = spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad coefficient {t:?} in --phi")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(CliError::Usage("--phi coefficients must be finite".into()));
    }
    if 2 * coeffs.len() > n {
        return Err(CliError::Usage(format!("{} coefficients do not fit a {n}-node grid", coeffs.len())));
    }
    let grid = Grid::new(n)?;
    Ok(grid.sample(|s| coeffs.iter().enumerate().map(|(k, c)| c * (k as f64 * s).cos()).sum::<f64>())?)
}

/// Two-column CSV with header `s,phi`, rows on the nodes `-π + 2πj/n`.
pub fn from_csv(path: &Path) -> CliResult<RealFunction> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.clone();
    if header.len() != 2 || header[0].trim() != "s" || header[1].trim() != "phi" {
        return Err(CliError::Usage(format!("{}: header must be s,phi", path.display())));
    }
    let mut s = Vec::new();
    let mut phi = Vec::new();
    for record in reader.records() {
        let record = record?;
        let parse = |i: usize| -> CliResult<f64> {
            record[i]
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{}: bad number {:?}", path.display(), &record[i])))
        };
        s.push(parse(0)?);
        phi.push(parse(1)?);
    }
    let grid = Grid::new(phi.len())?;
    for (j, &sj) in s.iter().enumerate() {
        if (sj - grid.node(j)).abs() > 1e-9 * PI {
            return Err(CliError::Usage(format!(
                "{}: row {j} has s = {sj}, expected the grid node {}",
                path.display(),
                grid.node(j)
            )));
        }
    }
    Ok(RealFunction::new(grid, phi)?)
}
