//! Runs every check for one field and groups the outcomes by topic.

use serde::Serialize;

use crate::check::{all_pass, Check};
use crate::classify::{expected_plane_sizes, expected_point_sizes, Geometry};
use crate::covering::{geometric_cross_check, run_code_suite, verify_saturating, McfReport};
use crate::gf::FieldSpec;
use crate::incidence::{
    design_checks, full_report, null_polarity_check, transpose_relations_check, verify_section4_relations,
    verify_section5_values, DesignCheck, IncidenceReport, SCHEMA_VERSION,
};

/// The `q` grid of the full suite.
pub const SUITE_GRID: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// check that deleting any cubic point breaks saturation
    pub minimality: bool,
    /// compare submatrices, not only their parameters
    pub matrix_transpose: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub q: usize,
    pub xi: i32,
    pub sections: Vec<Section>,
    #[serde(skip)]
    pub incidence: Option<IncidenceReport>,
    #[serde(skip)]
    pub code: Option<McfReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| all_pass(&s.checks))
    }

    pub fn checks(&self) -> impl Iterator<Item = (&'static str, &Check)> {
        self.sections.iter().flat_map(|s| s.checks.iter().map(move |c| (s.name, c)))
    }

    pub fn first_failure(&self) -> Option<(&'static str, &Check)> {
        self.checks().find(|(_, c)| !c.pass)
    }
}

/// Runs all checks for the field. Construction errors become failed checks
/// rather than early returns, so the report is always complete.
pub fn verify_field(field: FieldSpec, opts: VerifyOptions) -> VerifyReport {
    let q = field.order() as usize;
    let xi = field.xi();
    let mut report =
        VerifyReport { schema_version: SCHEMA_VERSION, q, xi, sections: Vec::new(), incidence: None, code: None };
    let push = |report: &mut VerifyReport, name, checks| report.sections.push(Section { name, checks });

    let geom = match Geometry::new(field) {
        Ok(g) => g,
        Err(e) => {
            push(&mut report, "geometry", vec![Check::fail("cubic, developable and chords", e.to_string())]);
            return report;
        }
    };
    let consistency = (0..geom.space().size()).find_map(|p| geom.point_class_at(p).err());
    push(
        &mut report,
        "geometry",
        vec![Check::from_bool("chord type and osculating count agree at every point", consistency.is_none(), || {
            consistency.unwrap().to_string()
        })],
    );

    let part = match geom.partition() {
        Ok(p) => p,
        Err(e) => {
            push(&mut report, "orbits", vec![Check::fail("orbit sizes", e.to_string())]);
            return report;
        }
    };
    push(
        &mut report,
        "orbits",
        vec![
            Check::equal("plane orbit sizes", part.plane_sizes(), expected_plane_sizes(q)),
            Check::equal("point orbit sizes", part.point_sizes(), expected_point_sizes(q, xi)),
        ],
    );

    let inc = match full_report(&geom, &part) {
        Ok(r) => r,
        Err(e) => {
            push(&mut report, "tables", vec![Check::fail("tactical decomposition", e.to_string())]);
            return report;
        }
    };
    push(&mut report, "tables", inc.table_checks());
    push(&mut report, "counting identities", verify_section4_relations(&geom, &part, &inc));
    push(&mut report, "exact values", verify_section5_values(&geom, &part, &inc));
    push(&mut report, "designs", design_checks(&geom, &part).iter().map(DesignCheck::to_check).collect());
    let polarity =
        null_polarity_check(&geom, &part).unwrap_or_else(|_| vec![Check::skip("null polarity", "characteristic 3")]);
    push(&mut report, "polarity", polarity);
    push(&mut report, "transpose", transpose_relations_check(&geom, &part, &inc, opts.matrix_transpose));

    if q >= 5 {
        match run_code_suite(&geom) {
            Ok(suite) => {
                let mut checks = suite.checks;
                checks.extend(geometric_cross_check(&geom, &part, &inc.counts, &suite.code, &suite.census));
                checks.extend(verify_saturating(&geom, &part, opts.minimality));
                report.code = Some(suite.report);
                push(&mut report, "code", checks);
            }
            Err(e) => push(&mut report, "code", vec![Check::fail("code suite", e.to_string())]),
        }
    } else {
        push(&mut report, "code", vec![Check::skip("code suite", "needs q >= 5")]);
    }
    report.incidence = Some(inc);
    report
}
