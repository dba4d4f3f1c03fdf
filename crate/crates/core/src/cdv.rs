//! Colin de Verdière certificates for the complement of a penny contact graph.
//!
//! For a realization with contact graph `G`, the candidate is `M = E - D`.
//! It is zero on the edges of `G`, negative on the edges of the complement,
//! and has unit diagonal. The certificate records:
//!
//! * **M1** the sign pattern above,
//! * **M2** exactly one negative eigenvalue, with `λ₂` in the zero cluster,
//! * **M3** the Strong Arnold Property: no nonzero symmetric zero-diagonal `X`
//!   supported on `E(G)` with `MX = 0`, checked directly on `M` and by
//!   degeneracy-ordered elimination on `D`.
//!
//! The corank of `M` is then a lower bound for μ of the complement.

use serde::Serialize;

use crate::edm::{
    classify, columns_independent, edm_from_points, nullspace_relation, Edm, EdmClassification,
    EdmKind, NullspaceReport,
};
use crate::error::{Error, Result};
use crate::graphs::{
    classify_family, complement, connected_components, degeneracy_ordering, Degeneracy,
    FamilyClass, Graph,
};
use crate::numkernel::{
    numeric_rank, rectangular_rank, sym_eigen, RankDecision, SymMatrix, TolerancePolicy,
};
use crate::penny::{contact_graph, DeadZonePair, Realization};

/// Largest order for which the direct SAP system is assembled by default.
pub const DIRECT_SAP_MAX_ORDER: usize = 12;

/// `M = E - D`, with entries within contact tolerance of zero snapped to 0.
pub fn build_candidate(edm: &Edm, policy: &TolerancePolicy) -> SymMatrix {
    let d = edm.matrix();
    SymMatrix::from_fn(d.order(), |i, j| {
        let v = 1.0 - d.get(i, j);
        if i != j && v.abs() <= policy.contact {
            0.0
        } else {
            v
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct M1Violation {
    pub i: usize,
    pub j: usize,
    pub value: f64,
    pub contact: bool,
}

/// M1 for the complement: zero on contacts, strictly negative elsewhere.
pub fn check_m1(m: &SymMatrix, g: &Graph, policy: &TolerancePolicy) -> Option<M1Violation> {
    let n = m.order();
    for i in 0..n {
        for j in (i + 1)..n {
            let value = m.get(i, j);
            let contact = g.has_edge(i, j);
            let ok = if contact {
                value.abs() <= policy.contact
            } else {
                value < -policy.contact
            };
            if !ok {
                return Some(M1Violation {
                    i,
                    j,
                    value,
                    contact,
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct M2Report {
    pub ok: bool,
    pub negative_count: usize,
    pub eigenvalues: Vec<f64>,
    pub lambda2_in_zero_cluster: bool,
    pub rank: RankDecision,
}

impl M2Report {
    pub fn corank(&self) -> usize {
        self.eigenvalues.len() - self.rank.rank
    }
}

/// Counts eigenvalues below the zero cluster; M2 holds iff exactly one.
pub fn check_m2(m: &SymMatrix, policy: &TolerancePolicy) -> Result<M2Report> {
    let eig = sym_eigen(m)?;
    let rank = numeric_rank(&eig, policy).require_gap("eigenvalues of M", policy)?;
    let values = eig.values().to_vec();
    let negative_count = values.iter().filter(|&&v| v < -rank.threshold).count();
    let lambda2_in_zero_cluster = values.len() >= 2 && values[1].abs() <= rank.threshold;
    Ok(M2Report {
        ok: negative_count == 1,
        negative_count,
        eigenvalues: values,
        lambda2_in_zero_cluster,
        rank,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct M3Direct {
    pub unknowns: usize,
    pub rank: usize,
    pub nullity: usize,
    pub gap_ratio: f64,
}

/// Nullity of `X ↦ MX` on symmetric zero-diagonal `X` supported on `E(G)`.
pub fn check_m3_direct(m: &SymMatrix, g: &Graph, policy: &TolerancePolicy) -> Result<M3Direct> {
    let n = m.order();
    if g.node_count() != n {
        return Err(Error::Parameter(format!(
            "graph has {} nodes, matrix order {n}",
            g.node_count()
        )));
    }
    let edges = g.edges();
    let cols = edges.len();
    if cols == 0 {
        return Ok(M3Direct {
            unknowns: 0,
            rank: 0,
            nullity: 0,
            gap_ratio: f64::INFINITY,
        });
    }
    // row (a, b) of MX; X_ij = X_ji = x_e contributes M_ai to (a, j) and M_aj to (a, i)
    let rows = n * n;
    let mut system = vec![0.0; rows * cols];
    for (e, &(i, j)) in edges.iter().enumerate() {
        for a in 0..n {
            system[(a * n + j) * cols + e] += m.get(a, i);
            system[(a * n + i) * cols + e] += m.get(a, j);
        }
    }
    let rank = rectangular_rank(rows, cols, &system, policy)?.require_gap("SAP system", policy)?;
    Ok(M3Direct {
        unknowns: cols,
        rank: rank.rank,
        nullity: cols - rank.rank,
        gap_ratio: rank.gap_ratio,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EliminationStep {
    pub node: usize,
    /// Neighbors still in the graph when `node` is peeled.
    pub live: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Elimination {
    pub eliminated: bool,
    pub unknowns: usize,
    pub steps: Vec<EliminationStep>,
    pub failure: Option<String>,
}

/// Replays the elimination of `DX = 0` along a 3-degeneracy peeling order:
/// each peeled node leaves at most three live unknowns whose columns of `D`
/// are independent, so those unknowns vanish.
pub fn check_m3_elimination(edm: &Edm, g: &Graph, policy: &TolerancePolicy) -> Result<Elimination> {
    let n = edm.order();
    let unknowns = g.edge_count();
    let fail = |steps: Vec<EliminationStep>, msg: String| Elimination {
        eliminated: false,
        unknowns,
        steps,
        failure: Some(msg),
    };
    let d = edm.matrix();
    if unknowns > 0 {
        for a in 0..n {
            for b in (a + 1)..n {
                if d.get(a, b) <= 0.0 {
                    return Err(Error::Precondition(format!(
                        "column independence needs positive off-diagonal entries; ({a},{b}) is {}",
                        d.get(a, b)
                    )));
                }
            }
        }
    }
    let order = match degeneracy_ordering(g, 3) {
        Degeneracy::Ordering(o) => o,
        Degeneracy::Stuck(nodes) => {
            return Ok(fail(
                Vec::new(),
                format!("graph is not 3-degenerate; peeling stuck on nodes {nodes:?}"),
            ))
        }
    };
    let mut peeled = vec![false; n];
    let mut steps = Vec::with_capacity(n);
    let mut eliminated = 0;
    for (step, &v) in order.iter().enumerate() {
        let live: Vec<usize> = g.neighbors(v).filter(|&u| !peeled[u]).collect();
        peeled[v] = true;
        if live.len() > 3 {
            steps.push(EliminationStep {
                node: v,
                live: live.clone(),
            });
            return Ok(fail(
                steps,
                format!("step {step}: node {v} has {} live unknowns", live.len()),
            ));
        }
        if !live.is_empty() && !columns_independent(edm, &live, policy)? {
            steps.push(EliminationStep {
                node: v,
                live: live.clone(),
            });
            return Ok(fail(
                steps,
                format!("step {step}: columns {live:?} of D are dependent"),
            ));
        }
        eliminated += live.len();
        steps.push(EliminationStep { node: v, live });
    }
    Ok(Elimination {
        eliminated: eliminated == unknowns,
        unknowns,
        steps,
        failure: None,
    })
}

/// When to run the direct SAP check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum DirectSap {
    /// Only for orders up to [`DIRECT_SAP_MAX_ORDER`].
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Confirm `rank(D)` and `rank(M)` exactly when coordinates are exact.
    pub exact: bool,
    pub direct_sap: DirectSap,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenSummary {
    pub min: f64,
    pub zero_cluster_size: usize,
    pub gap_ratio: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CdvCertificate {
    #[serde(skip)]
    pub m: SymMatrix,
    /// Order of the certified matrix (`n - 1` on the reduced path).
    pub order: usize,
    pub m1_ok: bool,
    pub m1_violation: Option<M1Violation>,
    pub m2_ok: bool,
    pub negative_eigs: usize,
    pub lambda2_in_zero_cluster: bool,
    pub m3_ok: bool,
    pub sap_nullity_direct: Option<usize>,
    pub sap_elimination: bool,
    pub sap_elimination_failure: Option<String>,
    pub sap_method_agreement: Option<bool>,
    pub rank_m: usize,
    pub corank: usize,
    pub mu_lower_bound: Option<usize>,
    pub reduced: bool,
    pub eigen: EigenSummary,
}

impl CdvCertificate {
    pub fn conditions_hold(&self) -> bool {
        self.m1_ok && self.m2_ok && self.m3_ok
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationSummary {
    pub kind: EdmKind,
    pub embedding_dim: usize,
    pub rank_d: usize,
    pub e_dot_w: f64,
    pub spherical_by_rank: bool,
    pub spherical_by_e_dot_w: bool,
}

impl ClassificationSummary {
    pub fn radius_sq(&self) -> Option<f64> {
        match self.kind {
            EdmKind::Spherical { radius_sq } => Some(radius_sq),
            EdmKind::Nonspherical => None,
        }
    }
}

impl From<&EdmClassification> for ClassificationSummary {
    fn from(c: &EdmClassification) -> Self {
        ClassificationSummary {
            kind: c.kind,
            embedding_dim: c.embedding_dim,
            rank_d: c.rank_d,
            e_dot_w: c.e_dot_w,
            spherical_by_rank: c.spherical_by_rank,
            spherical_by_e_dot_w: c.spherical_by_e_dot_w,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub name: String,
    pub n: usize,
    pub contact_edges: usize,
    pub family_class: FamilyClass,
    pub complement_connected: bool,
    /// Center disk removed on the reduced path.
    pub isolated_node: Option<usize>,
    /// Classification of the certified instance (the petals on the reduced path).
    pub classification: ClassificationSummary,
    /// Classification of the EDM of the whole realization.
    pub full_classification: ClassificationSummary,
    pub rank_d_exact: Option<usize>,
    pub full_rank_d_exact: Option<usize>,
    pub rank_m_exact: Option<usize>,
    pub nullspace: NullspaceReport,
    pub expected_corank: usize,
    /// `n - 3` for paths, unions of paths and cycles, otherwise `n - 4`.
    pub family_bound: usize,
    pub certificate: CdvCertificate,
    pub dead_zone: Vec<DeadZonePair>,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl TheoremReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Flower structure: `Ḡ` has an isolated node adjacent in `G` to all others.
fn flower_center(g: &Graph, comps: &[Vec<usize>]) -> Result<usize> {
    let n = g.node_count();
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    if comps.len() != 2 || !sizes.contains(&1) {
        return Err(Error::Consistency(format!(
            "disconnected complement must split as one isolated node plus the rest, got component sizes {sizes:?}"
        )));
    }
    if !(5..=7).contains(&n) {
        return Err(Error::Consistency(format!(
            "disconnected complement on {n} nodes; only n = 5, 6, 7 are possible"
        )));
    }
    let center = comps.iter().find(|c| c.len() == 1).expect("checked above")[0];
    if g.degree(center) != n - 1 {
        return Err(Error::Consistency(format!(
            "isolated complement node {center} touches only {} disks",
            g.degree(center)
        )));
    }
    Ok(center)
}

/// Certifies the corank bound for the complement of the contact graph of `r`.
///
/// When the complement is disconnected the certificate is built on the
/// petals of the flower (the center removed) and the component maximum rule
/// gives the bound.
pub fn verify_theorem(
    r: &Realization,
    policy: &TolerancePolicy,
    opts: VerifyOptions,
) -> Result<TheoremReport> {
    policy.validate()?;
    let n = r.len();
    if n < 5 {
        return Err(Error::Hypothesis(format!(
            "the corank bound needs n >= 5, got {n}"
        )));
    }
    let contact = contact_graph(r, policy)?;
    let g = contact.graph;
    let comps = connected_components(&complement(&g));
    let complement_connected = comps.len() == 1;

    let (work_r, work_g, isolated_node) = if complement_connected {
        (r.clone(), g.clone(), None)
    } else {
        let center = flower_center(&g, &comps)?;
        let petals: Vec<usize> = (0..n).filter(|&v| v != center).collect();
        (
            r.without_point(center),
            g.induced_subgraph(&petals),
            Some(center),
        )
    };
    let reduced = isolated_node.is_some();
    let order = work_r.len();

    let full_edm = edm_from_points(r);
    let full_cls = classify(&full_edm, policy)?;
    let (edm, cls) = if reduced {
        let edm = edm_from_points(&work_r);
        let cls = classify(&edm, policy)?;
        (edm, cls)
    } else {
        (full_edm.clone(), full_cls.clone())
    };
    let nullspace = nullspace_relation(&edm, policy)?;
    let m = build_candidate(&edm, policy);
    let mut failures = Vec::new();

    let m1_violation = check_m1(&m, &work_g, policy);
    if let Some(v) = m1_violation {
        failures.push(format!(
            "M1 violated at ({},{}): entry {:e}",
            v.i, v.j, v.value
        ));
    }

    let m2 = check_m2(&m, policy)?;
    if !m2.ok {
        failures.push(format!("M2: {} negative eigenvalues", m2.negative_count));
    }
    if !m2.lambda2_in_zero_cluster {
        failures.push(format!(
            "M2: second eigenvalue {:e} is not zero",
            m2.eigenvalues[1]
        ));
    }

    let run_direct = match opts.direct_sap {
        DirectSap::Auto => order <= DIRECT_SAP_MAX_ORDER,
        DirectSap::Always => true,
        DirectSap::Never => false,
    };
    let direct = if run_direct {
        Some(check_m3_direct(&m, &work_g, policy)?)
    } else {
        None
    };
    let elimination = check_m3_elimination(&edm, &work_g, policy)?;
    let sap_nullity_direct = direct.as_ref().map(|d| d.nullity);
    let sap_method_agreement = sap_nullity_direct.map(|k| (k == 0) == elimination.eliminated);
    if let Some(k) = sap_nullity_direct.filter(|&k| k > 0) {
        failures.push(format!("M3: direct SAP system has nullity {k}"));
    }
    if !elimination.eliminated {
        failures.push(format!(
            "M3: elimination failed: {}",
            elimination.failure.as_deref().unwrap_or("unknowns left")
        ));
    }
    if sap_method_agreement == Some(false) {
        failures.push("M3: direct and elimination checks disagree".into());
    }
    let m3_ok = elimination.eliminated && sap_nullity_direct.is_none_or(|k| k == 0);

    let rank_m = m2.rank.rank;
    let corank = order - rank_m;

    // rank(M) = rank(D) unless D is spherical with ρ² = 1/2
    let boundary = cls
        .radius_sq()
        .is_some_and(|rho_sq| (rho_sq - 0.5).abs() <= policy.contact);
    if !boundary && rank_m != cls.rank_d {
        failures.push(format!(
            "rank(M) = {rank_m} differs from rank(D) = {}",
            cls.rank_d
        ));
    }
    if !nullspace.equal {
        failures.push(format!(
            "null(M) != null(D): dims {} vs {}",
            nullspace.dim_null_m, nullspace.dim_null_d
        ));
    }

    let (rank_d_exact, rank_m_exact, full_rank_d_exact) = if opts.exact {
        (
            edm.exact_rank(),
            edm.exact_rank_of_candidate(),
            full_edm.exact_rank(),
        )
    } else {
        (None, None, None)
    };
    if let Some(k) = full_rank_d_exact.filter(|&k| k != full_cls.rank_d) {
        failures.push(format!(
            "exact rank(D) = {k} but numeric rank {} on the full realization",
            full_cls.rank_d
        ));
    }
    if let Some(k) = rank_d_exact.filter(|&k| k != cls.rank_d) {
        failures.push(format!(
            "exact rank(D) = {k} but numeric rank {}",
            cls.rank_d
        ));
    }
    if let Some(k) = rank_m_exact.filter(|&k| k != rank_m) {
        failures.push(format!("exact rank(M) = {k} but numeric rank {rank_m}"));
    }

    let expected_corank = if reduced {
        if !cls.kind.is_spherical() {
            failures.push("petals of a flower must be concyclic".into());
        }
        n - 4
    } else {
        // rank(D) = r + 1 (spherical) or r + 2 (nonspherical)
        let expected_rank = cls.embedding_dim + if cls.kind.is_spherical() { 1 } else { 2 };
        n - expected_rank
    };
    if corank != expected_corank {
        failures.push(format!("corank {corank} != expected {expected_corank}"));
    }

    let eigen = EigenSummary {
        min: m2.eigenvalues[0],
        zero_cluster_size: m2.corank(),
        gap_ratio: m2.rank.gap_ratio,
        threshold: m2.rank.threshold,
    };
    let m1_ok = m1_violation.is_none();
    let conditions = m1_ok && m2.ok && m3_ok;
    let mu_lower_bound = conditions.then_some(corank);
    if let Some(mu) = mu_lower_bound {
        let complement_complete = g.edge_count() == 0;
        let cap = if complement_complete { n - 1 } else { n - 2 };
        if mu > cap {
            failures.push(format!("bound {mu} exceeds the general cap {cap}"));
        }
    }

    let family_class = classify_family(&g);
    let certificate = CdvCertificate {
        m,
        order,
        m1_ok,
        m1_violation,
        m2_ok: m2.ok,
        negative_eigs: m2.negative_count,
        lambda2_in_zero_cluster: m2.lambda2_in_zero_cluster,
        m3_ok,
        sap_nullity_direct,
        sap_elimination: elimination.eliminated,
        sap_elimination_failure: elimination.failure,
        sap_method_agreement,
        rank_m,
        corank,
        mu_lower_bound,
        reduced,
        eigen,
    };
    Ok(TheoremReport {
        name: r.name.clone(),
        n,
        contact_edges: g.edge_count(),
        family_class,
        complement_connected,
        isolated_node,
        classification: (&cls).into(),
        full_classification: (&full_cls).into(),
        rank_d_exact,
        full_rank_d_exact,
        rank_m_exact,
        nullspace,
        expected_corank,
        family_bound: n - family_class.corank_deficit(),
        certificate,
        dead_zone: contact.dead_zone,
        passed: failures.is_empty(),
        failures,
    })
}
