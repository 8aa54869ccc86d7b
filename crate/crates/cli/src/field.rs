//! Plot-ready samples of Φ over a rectangular grid.

use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Context};
use num_complex::Complex64;
use rayon::prelude::*;

use cliff_rbvp::{CliffordSolution, Contour, Region};

pub const THREADS_ENV: &str = "CLIFF_RBVP_THREADS";

pub const CSV_HEADER: [&str; 7] = [
    "x1", "x2", "phi_c0", "phi_c1", "phi_c2", "phi_c12", "region",
];

/// `x0,x1,y0,y1,nx,ny`: the rectangle `[x0,x1]×[y0,y1]` with `nx×ny` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for Grid {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            bail!("grid needs six comma-separated values x0,x1,y0,y1,nx,ny; got {s:?}");
        }
        let real = |i: usize| -> anyhow::Result<f64> {
            let v: f64 = parts[i]
                .parse()
                .with_context(|| format!("grid value {:?}", parts[i]))?;
            if !v.is_finite() {
                bail!("grid value {v} is not finite");
            }
            Ok(v)
        };
        let count = |i: usize| -> anyhow::Result<usize> {
            let v: usize = parts[i]
                .parse()
                .with_context(|| format!("grid count {:?}", parts[i]))?;
            if v == 0 {
                bail!("grid counts must be at least 1");
            }
            Ok(v)
        };
        Ok(Grid {
            x0: real(0)?,
            x1: real(1)?,
            y0: real(2)?,
            y1: real(3)?,
            nx: count(4)?,
            ny: count(5)?,
        })
    }
}

fn ticks(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

impl Grid {
    /// Row-major points, `x` varying fastest.
    pub fn points(&self) -> Vec<Complex64> {
        let xs = ticks(self.x0, self.x1, self.nx);
        ticks(self.y0, self.y1, self.ny)
            .into_iter()
            .flat_map(|y| xs.iter().map(move |&x| Complex64::new(x, y)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRow {
    pub point: Complex64,
    pub phi: [f64; 4],
    pub region: Region,
}

/// Thread count from the environment, if set to a positive integer.
pub fn thread_cap() -> anyhow::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV}={v:?}"))?;
            if n == 0 {
                bail!("{THREADS_ENV} must be at least 1");
            }
            Ok(Some(n))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(e).context(THREADS_ENV),
    }
}

/// Evaluates Φ at every grid point off the refusal band, in grid order.
pub fn sample_field(
    contour: &Contour,
    solution: &CliffordSolution,
    constants: &[Complex64],
    grid: &Grid,
    threads: Option<usize>,
) -> anyhow::Result<Vec<FieldRow>> {
    let points = grid.points();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let rows: Vec<Option<FieldRow>> = pool.install(|| {
        points
            .par_iter()
            .map(|&z| {
                let region = contour.locate(z).tag;
                if region == Region::NearBoundary {
                    return Ok(None);
                }
                let phi = solution.evaluate_at(z, constants)?.to_array();
                Ok(Some(FieldRow {
                    point: z,
                    phi,
                    region,
                }))
            })
            .collect::<cliff_rbvp::Result<_>>()
    })?;
    Ok(rows.into_iter().flatten().collect())
}

/// CSV with one row per sample; floats in shortest round-trip form.
pub fn write_csv(rows: &[FieldRow], out: impl Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let [c0, c1, c2, c12] = r.phi;
        w.write_record([
            r.point.re.to_string(),
            r.point.im.to_string(),
            c0.to_string(),
            c1.to_string(),
            c2.to_string(),
            c12.to_string(),
            r.region.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parses_and_counts() {
        let g: Grid = "-2,2,-2,2,50,50".parse().unwrap();
        assert_eq!(g.points().len(), 2500);
        assert_eq!(g.points()[1], Complex64::new(-2.0 + 4.0 / 49.0, -2.0));
        let single: Grid = "1,5,0,0,1,1".parse().unwrap();
        assert_eq!(single.points(), vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn bad_grids_are_rejected() {
        for s in ["1,2,3", "0,1,0,1,0,5", "0,1,0,nan,2,2", "a,1,0,1,2,2"] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
    }
}
