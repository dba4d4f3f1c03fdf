//! Diagnostics for a realization's distance matrix, without the certificate.

use serde::Serialize;

use crate::cdv::ClassificationSummary;
use crate::edm::{
    beta_psd_check, classify, edm_from_points, nullspace_relation, BetaCheck, NullspaceReport,
};
use crate::error::Result;
use crate::graphs::{
    classify_family, complement, degeneracy_ordering, forbidden_subgraph_check, FamilyClass,
    ForbiddenFlags,
};
use crate::numkernel::TolerancePolicy;
use crate::penny::{
    circumcircle_classify, contact_graph, harborth_bound, CircumcircleReport, Realization,
};

#[derive(Debug, Clone, Serialize)]
pub struct EdmInfo {
    pub name: String,
    pub n: usize,
    pub contact_edges: usize,
    pub harborth_bound: usize,
    pub forbidden: ForbiddenFlags,
    /// Peeling order with at most three later neighbors, when one exists.
    pub degeneracy_order: Option<Vec<usize>>,
    pub family_class: FamilyClass,
    pub complement_connected: bool,
    pub classification: ClassificationSummary,
    pub radius_sq: Option<f64>,
    pub e_dot_w_tolerance: f64,
    pub rank_gap_ratio: f64,
    pub solve_residual: f64,
    pub circumcircle: Option<CircumcircleReport>,
    pub beta: Option<BetaCheck>,
    pub nullspace: NullspaceReport,
}

/// Contact graph facts, EDM classification and the spectral side checks.
pub fn edm_info(r: &Realization, policy: &TolerancePolicy) -> Result<EdmInfo> {
    policy.validate()?;
    let g = contact_graph(r, policy)?.graph;
    let edm = edm_from_points(r);
    let cls = classify(&edm, policy)?;
    let beta = if cls.kind.is_spherical() {
        Some(beta_psd_check(&edm, &cls, policy)?)
    } else {
        None
    };
    let circumcircle = if r.len() >= 3 {
        Some(circumcircle_classify(r, policy)?)
    } else {
        None
    };
    Ok(EdmInfo {
        name: r.name.clone(),
        n: r.len(),
        contact_edges: g.edge_count(),
        harborth_bound: harborth_bound(r.len()),
        forbidden: forbidden_subgraph_check(&g),
        degeneracy_order: degeneracy_ordering(&g, 3).ordering().map(<[usize]>::to_vec),
        family_class: classify_family(&g),
        complement_connected: complement(&g).is_connected(),
        radius_sq: cls.radius_sq(),
        e_dot_w_tolerance: cls.e_dot_w_tolerance,
        rank_gap_ratio: cls.rank_decision.gap_ratio,
        solve_residual: cls.solve_residual,
        nullspace: nullspace_relation(&edm, policy)?,
        classification: ClassificationSummary::from(&cls),
        circumcircle,
        beta,
    })
}
