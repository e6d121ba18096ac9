//! Browser bindings for three operations: the `(k_ij, r_ij)` grid, the code
//! report, and a 0/1 bitmap of one submatrix.

use twisted_cubic::classify::Geometry;
use twisted_cubic::covering::{build_gdrs, mu_and_density, newton_radius_check, syndrome_census};
use twisted_cubic::gf::field_of_order;
use twisted_cubic::incidence::{full_report, submatrix_bits, IncidenceError};
use wasm_bindgen::prelude::*;

/// Largest order offered in the page; keeps each call well under a second.
pub const MAX_ORDER: u64 = 16;

/// Largest bitmap handed to the canvas.
pub const MAX_CELLS: usize = 1 << 20;

fn geometry(q: u64) -> Result<Geometry, String> {
    if q > MAX_ORDER {
        return Err(format!("q = {q} is above the demo limit {MAX_ORDER}"));
    }
    let field = field_of_order(q).map_err(|e| e.to_string())?;
    Geometry::new(field).map_err(|e| e.to_string())
}

pub fn tables(q: u64) -> Result<String, String> {
    let geom = geometry(q)?;
    let part = geom.partition().map_err(|e| e.to_string())?;
    let report = full_report(&geom, &part).map_err(|e| e.to_string())?;
    Ok(report.to_json(&report.table_checks()).to_string())
}

pub fn code_report(q: u64) -> Result<String, String> {
    let geom = geometry(q)?;
    let code = build_gdrs(&geom).map_err(|e| e.to_string())?;
    let census = syndrome_census(&code);
    let report = mu_and_density(&code, &census).map_err(|e| e.to_string())?;
    let mut checks = report.checks();
    checks.extend(newton_radius_check(&census));
    let mut v = report.to_json(&checks);
    v["summary"] = report.summary().into();
    Ok(v.to_string())
}

/// Row-major 0/1 cells of `I_ij`.
pub struct Bits {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<u8>,
}

pub fn bits(q: u64, i: usize, j: usize) -> Result<Bits, String> {
    if !(1..=5).contains(&i) || !(1..=5).contains(&j) {
        return Err(IncidenceError::BadIndex(i, j).to_string());
    }
    let geom = geometry(q)?;
    let part = geom.partition().map_err(|e| e.to_string())?;
    let (rows, cols) = (part.plane_orbit(i).len(), part.point_orbit(j).len());
    if rows * cols > MAX_CELLS {
        return Err(IncidenceError::CeilingExceeded { cells: rows * cols, ceiling: MAX_CELLS }.to_string());
    }
    let m = submatrix_bits(&geom, &part, i, j);
    let cells = m.into_iter().flatten().map(u8::from).collect();
    Ok(Bits { rows, cols, cells })
}

#[wasm_bindgen]
pub struct Bitmap {
    rows: usize,
    cols: usize,
    cells: Vec<u8>,
}

#[wasm_bindgen]
impl Bitmap {
    #[wasm_bindgen(getter)]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[wasm_bindgen(getter)]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major cells, one byte each.
    pub fn cells(&self) -> Vec<u8> {
        self.cells.clone()
    }
}

#[wasm_bindgen(js_name = tablesJson)]
pub fn tables_json(q: u32) -> Result<String, JsError> {
    tables(q.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = codeReportJson)]
pub fn code_report_json(q: u32) -> Result<String, JsError> {
    code_report(q.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = submatrixBitmap)]
pub fn submatrix_bitmap(q: u32, i: usize, j: usize) -> Result<Bitmap, JsError> {
    let b = bits(q.into(), i, j).map_err(|e| JsError::new(&e))?;
    Ok(Bitmap { rows: b.rows, cols: b.cols, cells: b.cells })
}
