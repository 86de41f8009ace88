//! CSV emission: comma separated, header row, LF line endings, numbers in Rust's shortest
//! round-trip scientific notation (`{:e}`). Files are written to a temporary sibling and
//! renamed into place.

use std::fs;
use std::path::Path;

use crate::beam::{BeamModel, BeamState, EnergyRecord};
use crate::constitutive::PointTrajectory;
use crate::error::{Error, Result};

pub const POINT_HEADER: [&str; 10] = ["t", "eps", "E", "q", "P", "U", "sigma", "D", "F", "diss"];
pub const SNAPSHOT_HEADER: [&str; 8] = ["t", "x", "u", "v", "eps", "sigma", "E", "P"];
pub const ENERGY_HEADER: [&str; 7] = ["t", "K", "F", "diss_hyst", "diss_visc", "work_boundary", "residual"];

pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Writes `header` and `rows` to `path` atomically.
pub fn write_table<S: AsRef<str>>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<S>>) -> Result<()> {
    let io = |e: csv::Error| Error::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("csv.tmp");
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&tmp).map_err(io)?;
        w.write_record(header).map_err(io)?;
        for row in rows {
            w.write_record(row.iter().map(|s| s.as_ref())).map_err(io)?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_point_csv(path: &Path, traj: &PointTrajectory<f64>) -> Result<()> {
    write_table(
        path,
        &POINT_HEADER,
        traj.records.iter().map(|r| {
            [r.t, r.eps, r.field, r.q, r.p, r.u, r.sigma, r.d, r.free_energy, r.diss].iter().map(|&x| num(x)).collect()
        }),
    )
}

/// One row per node and snapshot; element quantities are averaged over the adjacent elements.
pub fn write_beam_snapshots(path: &Path, model: &BeamModel<f64>, snapshots: &[BeamState<f64>]) -> Result<()> {
    let n = model.mesh.elements();
    let rows = snapshots.iter().flat_map(|s| {
        (0..=n).map(move |i| {
            let adj: Vec<usize> = [i.checked_sub(1), (i < n).then_some(i)].into_iter().flatten().collect();
            let avg = |f: &dyn Fn(usize) -> f64| adj.iter().map(|&e| f(e)).sum::<f64>() / adj.len() as f64;
            let el = &s.elements;
            vec![
                num(s.t),
                num(model.mesh.x(i)),
                num(s.u[i]),
                num(s.v[i]),
                num(avg(&|e| el[e].eps)),
                num(avg(&|e| el[e].sigma)),
                num(avg(&|e| el[e].field)),
                num(avg(&|e| el[e].p)),
            ]
        })
    });
    write_table(path, &SNAPSHOT_HEADER, rows)
}

pub fn write_beam_energy(path: &Path, records: &[EnergyRecord<f64>]) -> Result<()> {
    write_table(
        path,
        &ENERGY_HEADER,
        records.iter().map(|r| {
            [r.t, r.kinetic, r.free_energy, r.diss_hyst, r.diss_visc, r.work_boundary, r.residual]
                .iter()
                .map(|&x| num(x))
                .collect()
        }),
    )
}

/// Reads a CSV written by this module back into a header and numeric rows.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let io = |e: csv::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(io)?;
    let header = r.headers().map_err(io)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(io)?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| Error::Io(format!("{}: bad number '{s}': {e}", path.display()))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}
