use serde::{Deserialize, Serialize};

use super::{Chart, ComplexError, ComplexSpace, LabeledComplex};
use crate::geometry::{
    arrangement_cells, laguerre_from_signs, DiagramDocument, Hyperplane, LaguerreDiagram, Polytope,
    SignVector,
};

const TOL: f64 = 1e-9;

/// Laguerre diagram refining a best-response complex: every diagram cell
/// lies inside one complex cell and inherits its label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinedComplex {
    pub space: ComplexSpace,
    pub chart: Chart,
    pub domain: Polytope<f64>,
    pub hyperplanes: Vec<Hyperplane<f64>>,
    pub signs: Vec<SignVector>,
    pub diagram: LaguerreDiagram<f64>,
    /// Mixed action of each diagram cell.
    pub labels: Vec<Vec<f64>>,
    /// Pure action of each diagram cell, when labels are pure.
    pub actions: Option<Vec<usize>>,
    /// Complex cell containing each diagram cell.
    pub parents: Vec<usize>,
}

impl RefinedComplex {
    /// Number of diagram cells.
    pub fn len(&self) -> usize {
        self.diagram.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagram.is_empty()
    }

    /// Diagram cell of the chart point `z`.
    pub fn assign(&self, z: &[f64]) -> usize {
        self.diagram.assign(z)
    }

    /// Diagram cell of the ambient point `p`.
    pub fn assign_ambient(&self, p: &[f64]) -> usize {
        self.diagram.assign(&self.chart.to_chart(p))
    }

    pub fn document(&self) -> DiagramDocument<f64> {
        DiagramDocument {
            sites: self.diagram.sites.clone(),
            weights: self.diagram.weights.clone(),
            hyperplanes: self.hyperplanes.clone(),
            cells: self.signs.clone(),
            labels: self.labels.clone(),
        }
    }
}

/// Unit normal with its first significant entry positive.
fn canonical(h: &Hyperplane<f64>) -> Hyperplane<f64> {
    let u = h.unit();
    match u.c.iter().find(|v| v.abs() > 1e-12) {
        Some(&v) if v < 0.0 => u.flipped(),
        _ => u,
    }
}

fn cuts_interior(h: &Hyperplane<f64>, domain: &Polytope<f64>) -> bool {
    domain.clone().with_inequality(h.clone()).has_interior(TOL)
        && domain
            .clone()
            .with_inequality(h.flipped())
            .has_interior(TOL)
}

/// Refines `complex` to a Laguerre diagram through the arrangement of all
/// cell-boundary hyperplanes that cut the domain.
pub fn refine_to_laguerre(complex: &LabeledComplex) -> Result<RefinedComplex, ComplexError> {
    let domain = &complex.complex.domain;
    let mut hyperplanes: Vec<Hyperplane<f64>> = Vec::new();
    for cell in &complex.complex.cells {
        for h in &cell.inequalities {
            let h = canonical(h);
            let dup = hyperplanes.iter().any(|g| {
                g.c.iter().zip(&h.c).all(|(a, b)| (a - b).abs() <= TOL) && (g.b - h.b).abs() <= TOL
            });
            if !dup && cuts_interior(&h, domain) {
                hyperplanes.push(h);
            }
        }
    }

    let (diagram, signs, centers) = if hyperplanes.is_empty() {
        let center = domain.chebyshev()?.center;
        (
            LaguerreDiagram::trivial(complex.complex.dim()),
            vec![Vec::new()],
            vec![center],
        )
    } else {
        let arr = arrangement_cells(&hyperplanes, domain)?;
        let signs = arr.sign_vectors();
        let diagram = laguerre_from_signs(&hyperplanes, &signs)?;
        let centers = arr.cells.into_iter().map(|c| c.center).collect();
        (diagram, signs, centers)
    };

    let mut parents = Vec::with_capacity(centers.len());
    for c in &centers {
        let k = complex
            .complex
            .locate(c, TOL)
            .ok_or_else(|| ComplexError::Uncovered(c.clone()))?;
        parents.push(k);
    }
    let labels = parents
        .iter()
        .map(|&k| complex.complex.labels[k].clone())
        .collect();
    let actions = complex
        .actions
        .as_ref()
        .map(|a| parents.iter().map(|&k| a[k]).collect());
    Ok(RefinedComplex {
        space: complex.space,
        chart: complex.chart.clone(),
        domain: domain.clone(),
        hyperplanes,
        signs,
        diagram,
        labels,
        actions,
        parents,
    })
}
