//! Parameter sweeps of the multiplier report over `(s, t, p, q, R)`.

use serde::Serialize;

use crate::conditions::{strichartz_case_numbers, Number};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::generate::{gen_distribution, DistributionKind};
use crate::lattice::Lattice;
use crate::multiplier::{
    equivalence_report_with, MultiplierProblem, MultiplierReport, ReportOptions, CSV_HEADER,
};

/// The multiplier studied at each grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepField {
    /// Generated afresh on each lattice with the sample's seed.
    Generated(DistributionKind),
    /// A fixed field, truncated or zero-padded to each radius.
    Fixed { label: String, field: SpectralField },
}

impl SweepField {
    pub fn label(&self) -> String {
        match self {
            Self::Generated(kind) => kind.to_string(),
            Self::Fixed { label, .. } => label.clone(),
        }
    }

    fn realize(&self, lattice: &Lattice, seed: u64, real: bool) -> Result<SpectralField> {
        match self {
            Self::Generated(kind) => gen_distribution(lattice, *kind, seed, real),
            Self::Fixed { field, .. } => {
                if field.lattice().dim() != lattice.dim() {
                    return Err(Error::LatticeMismatch {
                        left: field.lattice().to_string(),
                        right: lattice.to_string(),
                    });
                }
                field.resized(lattice.radius())
            }
        }
    }
}

impl From<DistributionKind> for SweepField {
    fn from(kind: DistributionKind) -> Self {
        Self::Generated(kind)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub n: usize,
    /// Index values; exact rationals are gated in exact arithmetic.
    pub s: Vec<Number>,
    pub t: Vec<Number>,
    pub p: Vec<Number>,
    pub q: Vec<Number>,
    pub radii: Vec<usize>,
    pub field: SweepField,
    /// Fields generated per grid point, with seeds `seed, seed+1, …`.
    pub samples: usize,
    pub seed: u64,
    /// Generate real-valued fields.
    pub real: bool,
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub radius: usize,
    pub s: f64,
    pub t: f64,
    pub p: f64,
    pub q: f64,
    pub u_seed: u64,
    pub report: Option<MultiplierReport>,
    /// `ok`, or `refused: <failing inequality>`.
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub u_kind: String,
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

pub fn sweep_csv_header() -> String {
    format!("{CSV_HEADER},u_kind,u_seed,status")
}

impl SweepOutput {
    pub fn to_csv(&self) -> String {
        let mut out = sweep_csv_header();
        out.push('\n');
        for row in &self.rows {
            match &row.report {
                Some(rep) => out.push_str(&rep.csv_row()),
                None => out.push_str(&format!(
                    "{},{},{},{},{},{},,,,,",
                    row.n, row.radius, row.s, row.t, row.p, row.q
                )),
            }
            out.push_str(&format!(
                ",{},{},{}\n",
                self.u_kind.replace(',', ";"),
                row.u_seed,
                row.status.replace(',', ";")
            ));
        }
        out
    }
}

struct Point {
    s: Number,
    t: Number,
    p: Number,
    q: Number,
    radius: usize,
    u_seed: u64,
}

fn run_point(spec: &SweepSpec, pt: &Point) -> Result<SweepRow> {
    let (verdict, _) = strichartz_case_numbers(pt.s, pt.t, pt.p, pt.q, spec.n)?;
    let (s, t, p, q) = (pt.s.to_f64(), pt.t.to_f64(), pt.p.to_f64(), pt.q.to_f64());
    let mut row = SweepRow {
        n: spec.n,
        radius: pt.radius,
        s,
        t,
        p,
        q,
        u_seed: pt.u_seed,
        report: None,
        status: "ok".into(),
    };
    if !verdict.holds && !spec.force {
        row.status = format!("refused: {}", verdict.detail);
        return Ok(row);
    }
    let lattice = Lattice::new(spec.n, pt.radius)?;
    let u = spec.field.realize(&lattice, pt.u_seed, spec.real)?;
    let prob = MultiplierProblem::new(u, s, p, t, q)?;
    let opts = ReportOptions {
        force: spec.force,
        family_seed: spec.seed,
        ..ReportOptions::default()
    };
    row.report = Some(equivalence_report_with(&prob, &[], &opts, verdict)?);
    Ok(row)
}

/// Runs every grid point, in grid order `s, t, p, q, R, sample`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput> {
    if [
        spec.s.len(),
        spec.t.len(),
        spec.p.len(),
        spec.q.len(),
        spec.radii.len(),
        spec.samples,
    ]
    .contains(&0)
    {
        return Err(Error::EmptyGrid);
    }
    let mut points = Vec::new();
    for &s in &spec.s {
        for &t in &spec.t {
            for &p in &spec.p {
                for &q in &spec.q {
                    for &radius in &spec.radii {
                        for i in 0..spec.samples as u64 {
                            points.push(Point {
                                s,
                                t,
                                p,
                                q,
                                radius,
                                u_seed: spec.seed.wrapping_add(i),
                            });
                        }
                    }
                }
            }
        }
    }

    #[cfg(feature = "parallel")]
    let rows: Vec<SweepRow> = {
        use rayon::prelude::*;
        points
            .par_iter()
            .map(|pt| run_point(spec, pt))
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<SweepRow> = points
        .iter()
        .map(|pt| run_point(spec, pt))
        .collect::<Result<_>>()?;

    let warnings = rows
        .iter()
        .filter(|r| r.report.is_none())
        .map(|r| {
            format!(
                "skipped s={} t={} p={} q={} R={}: {}",
                r.s, r.t, r.p, r.q, r.radius, r.status
            )
        })
        .collect();
    Ok(SweepOutput {
        u_kind: spec.field.label(),
        rows,
        warnings,
    })
}
