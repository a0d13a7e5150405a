use std::time::Instant;

use serde::Serialize;

use super::logbasis::{log_derivations_with, LogBasisError, LogBasisOptions, NotFreeDiagnosis};
use super::{symbol_ideal_dimension, Timeout};
use crate::logder::{FrameDocument, SaitoFrame};
use crate::poly::{Polynomial, VarTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PerverseCertified,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub enum Freeness {
    Free(SaitoFrame),
    NotFree(NotFreeDiagnosis),
}

/// Freeness, symbol sequence and its regularity for one divisor. The
/// verdict is certified exactly when the divisor is free and the symbols
/// form a regular sequence; every other outcome is inconclusive.
#[derive(Clone, Debug)]
pub struct PerversityReport {
    pub divisor: Polynomial,
    pub freeness: Freeness,
    pub symbols: Vec<Polynomial>,
    /// Krull dimension of `Q[x, xi] / (sigma_1, ..., sigma_n)`.
    pub quotient_dimension: Option<usize>,
    pub regular: Option<bool>,
    pub verdict: Verdict,
    pub non_reduced_factor: Option<Polynomial>,
    pub notes: Vec<String>,
}

pub fn perversity_certificate(
    f: &Polynomial,
    bound: usize,
    deadline: Option<Instant>,
) -> Result<PerversityReport, Timeout> {
    let n = f.n();
    let opts = LogBasisOptions { bound, deadline };
    let basis = match log_derivations_with(f, &opts) {
        Ok(b) => b,
        Err(LogBasisError::Timeout(t)) => return Err(t),
        Err(LogBasisError::NotFree(diag)) => {
            let mut notes = vec!["no free basis found, so the criterion does not apply".to_string()];
            if diag.non_reduced_factor.is_some() {
                notes.push("f is not reduced; Saito's determinant can only reach the reduced equation".to_string());
            }
            if !diag.search_complete {
                notes.push(format!(
                    "search limited to the first {bound} of {} candidates; freeness is undecided",
                    diag.candidates
                ));
            }
            let non_reduced_factor = diag.non_reduced_factor.clone();
            return Ok(PerversityReport {
                divisor: f.clone(),
                freeness: Freeness::NotFree(diag),
                symbols: Vec::new(),
                quotient_dimension: None,
                regular: None,
                verdict: Verdict::Inconclusive,
                non_reduced_factor,
                notes,
            });
        }
        Err(LogBasisError::ZeroDivisor) => panic!("perversity of the zero polynomial"),
    };
    let frame = basis.frame;
    let symbols = frame.symbols();
    let mut notes = Vec::new();
    if frame.local_only_unit().is_some() {
        notes.push("determinant is f times a unit of the local ring only".to_string());
    }
    if basis.non_reduced_factor.is_some() {
        notes.push("f is not reduced; the criterion is stated for reduced equations".to_string());
    }
    let (dimension, regular) = match symbol_ideal_dimension(&symbols, deadline)? {
        Ok(d) => (Some(d), d == n),
        Err(_) => (None, false),
    };
    notes.push("regularity is decided in the polynomial ring, not in the local ring at a point".to_string());
    let verdict = if regular {
        Verdict::PerverseCertified
    } else {
        notes.push(format!(
            "symbol ideal has dimension {} > {n}: the graded Spencer complex is not a resolution and \
             this sufficient criterion is silent; holonomicity of D/D(delta_1, ..., delta_n) is not computed",
            dimension.map(|d| d.to_string()).unwrap_or_else(|| "?".into())
        ));
        Verdict::Inconclusive
    };
    Ok(PerversityReport {
        divisor: f.clone(),
        freeness: Freeness::Free(frame),
        symbols,
        quotient_dimension: dimension,
        regular: Some(regular),
        verdict,
        non_reduced_factor: basis.non_reduced_factor,
        notes,
    })
}

#[derive(Serialize)]
pub struct PerversityDocument {
    pub divisor: String,
    pub free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_free: Option<NotFreeDiagnosisDocument>,
    pub symbols: Vec<String>,
    pub quotient_dimension: Option<usize>,
    pub ambient_dimension: usize,
    pub regular: Option<bool>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_reduced_factor: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
pub struct NotFreeDiagnosisDocument {
    pub candidates: usize,
    pub subsets_tried: usize,
    pub search_complete: bool,
    pub best_det: Option<String>,
}

impl PerversityReport {
    pub fn document(&self, vars: &VarTable) -> PerversityDocument {
        let show = |p: &Polynomial| p.display(vars).to_string();
        let (frame, not_free) = match &self.freeness {
            Freeness::Free(fr) => (Some(FrameDocument::from_frame(fr, vars)), None),
            Freeness::NotFree(d) => (
                None,
                Some(NotFreeDiagnosisDocument {
                    candidates: d.candidates,
                    subsets_tried: d.subsets_tried,
                    search_complete: d.search_complete,
                    best_det: d.best_det.as_ref().map(show),
                }),
            ),
        };
        PerversityDocument {
            divisor: show(&self.divisor),
            free: frame.is_some(),
            frame,
            not_free,
            symbols: self.symbols.iter().map(show).collect(),
            quotient_dimension: self.quotient_dimension,
            ambient_dimension: 2 * vars.n(),
            regular: self.regular,
            verdict: self.verdict,
            non_reduced_factor: self.non_reduced_factor.as_ref().map(show),
            notes: self.notes.clone(),
        }
    }

    pub fn frame(&self) -> Option<&SaitoFrame> {
        match &self.freeness {
            Freeness::Free(f) => Some(f),
            Freeness::NotFree(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    #[test]
    fn normal_crossing_is_certified() {
        let v = VarTable::parse_list("x,y").unwrap();
        let f = parse_polynomial("x*y", &v).unwrap();
        let r = perversity_certificate(&f, 12, None).unwrap();
        assert_eq!(r.verdict, Verdict::PerverseCertified);
        assert_eq!(r.quotient_dimension, Some(2));
        let doc = serde_json::to_value(r.document(&v)).unwrap();
        assert_eq!(doc["verdict"], "perverse-certified");
        assert_eq!(doc["frame"]["unit"], "1");
    }

    #[test]
    fn generic_plane_arrangement_is_not_free() {
        let v = VarTable::parse_list("x,y,z").unwrap();
        let f = parse_polynomial("x*y*z*(x + y + z)", &v).unwrap();
        let r = perversity_certificate(&f, 12, None).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(matches!(r.freeness, Freeness::NotFree(_)));
    }
}
