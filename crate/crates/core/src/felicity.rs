//! Felicity of the main-clause subject form, and the reverse direction:
//! which form to use for an intended referent.
//!
//! The judgments encode three generalizations about Italian subjects:
//! continuation goes with a null subject, retention and shift with a strong
//! pronoun, and a null subject may still shift if morphology inside the
//! agreement window forces its referent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::centering::{CenteringState, Rule, RuleCheck, Transition};
use crate::error::AdviceError;
use crate::model::{compatible, EntityId, EntityTable, Form, MorphFeatures, Role};
use crate::resolver::{Basis, ResolutionResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FelicityLabel {
    Felicitous,
    Marked,
    InfelicitousGardenPath,
    Violation,
}

impl FelicityLabel {
    pub const ALL: [FelicityLabel; 4] = [
        FelicityLabel::Felicitous,
        FelicityLabel::Marked,
        FelicityLabel::InfelicitousGardenPath,
        FelicityLabel::Violation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FelicityLabel::Felicitous => "felicitous",
            FelicityLabel::Marked => "marked",
            FelicityLabel::InfelicitousGardenPath => "infelicitous_garden_path",
            FelicityLabel::Violation => "violation",
        }
    }
}

impl fmt::Display for FelicityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    NullContinue,
    StrongShift,
    NullShiftLicensed,
    NullShiftUnlicensed,
    StrongContinueMarked,
    R1Violation,
    R2Violation,
    GardenPath,
    PragmaticOverrideApplied,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FelicityVerdict {
    pub label: FelicityLabel,
    pub reasons: Vec<Reason>,
}

impl FelicityVerdict {
    fn new(label: FelicityLabel, reasons: Vec<Reason>) -> Self {
        FelicityVerdict { label, reasons }
    }
}

/// Labels one utterance. Rules apply first-match:
///
/// 1. a violated rule check
/// 2. a garden path
/// 3. a pragmatically overridden subject
/// 4. the discourse-initial utterance (nothing to continue or shift from)
/// 5. the null/strong × transition table
///
/// `subject_form` is `None` when the main clause has no subject or when its
/// form carries no null/overt contrast; such utterances are felicitous unless
/// rules 1 or 2 fire.
pub fn judge(
    transition: Transition,
    subject_form: Option<Form>,
    resolution: &ResolutionResult,
    checks: &[RuleCheck],
) -> FelicityVerdict {
    let violated: Vec<Reason> = checks
        .iter()
        .filter(|c| c.is_violated())
        .map(|c| match c.rule {
            Rule::R1 => Reason::R1Violation,
            Rule::R2 => Reason::R2Violation,
        })
        .collect();
    if !violated.is_empty() {
        return FelicityVerdict::new(FelicityLabel::Violation, violated);
    }
    if resolution.garden_path {
        return FelicityVerdict::new(
            FelicityLabel::InfelicitousGardenPath,
            vec![Reason::GardenPath],
        );
    }
    let subject_basis = resolution.subject_binding().map(|b| b.basis);
    if subject_basis == Some(Basis::GoldOverride) {
        return FelicityVerdict::new(
            FelicityLabel::Felicitous,
            vec![Reason::PragmaticOverrideApplied],
        );
    }
    if transition == Transition::Initial || subject_basis == Some(Basis::SegmentReference) {
        return FelicityVerdict::new(FelicityLabel::Felicitous, vec![]);
    }
    let continuing = transition == Transition::Continuation;
    match subject_form {
        Some(Form::NullSubject) if continuing => {
            FelicityVerdict::new(FelicityLabel::Felicitous, vec![Reason::NullContinue])
        }
        Some(Form::NullSubject) if resolution.subject_forced_in_window() => {
            FelicityVerdict::new(FelicityLabel::Felicitous, vec![Reason::NullShiftLicensed])
        }
        Some(Form::NullSubject) => {
            FelicityVerdict::new(FelicityLabel::Marked, vec![Reason::NullShiftUnlicensed])
        }
        Some(Form::StrongPronoun) if continuing => {
            FelicityVerdict::new(FelicityLabel::Marked, vec![Reason::StrongContinueMarked])
        }
        Some(Form::StrongPronoun) => {
            FelicityVerdict::new(FelicityLabel::Felicitous, vec![Reason::StrongShift])
        }
        _ => FelicityVerdict::new(FelicityLabel::Felicitous, vec![]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdviceRationale {
    /// Intended referent continues the center.
    Continuation,
    /// Window morphology singles out the intended referent.
    LicensedShift,
    /// Move away from the center with a stressed pronoun.
    StrongShift,
    /// Non-subject roles take a clitic.
    CliticRole,
    /// Neither pronoun would reach the intended referent felicitously.
    PronounUnavailable,
}

impl fmt::Display for AdviceRationale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdviceRationale::Continuation => "continuation",
            AdviceRationale::LicensedShift => "licensed_shift",
            AdviceRationale::StrongShift => "strong_shift",
            AdviceRationale::CliticRole => "clitic_role",
            AdviceRationale::PronounUnavailable => "pronoun_unavailable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormAdvice {
    pub form: Form,
    pub rationale: AdviceRationale,
}

/// Recommends a form for `intended` in `role`, given the centering state the
/// new utterance follows and the agreement features its verb will carry.
///
/// For subjects: a null subject when the referent is the current center and
/// the top-ranked Cf, or when the planned agreement picks it out among all
/// Cfs; otherwise a strong pronoun if it would land on the referent; otherwise
/// a proper name.
pub fn advise_form(
    intended: &EntityId,
    role: Role,
    state: &CenteringState,
    planned: &MorphFeatures,
    entities: &EntityTable,
) -> Result<FormAdvice, AdviceError> {
    if !state.cf.contains(intended) {
        return Err(AdviceError::NotAvailable(intended.clone()));
    }
    let target = entities
        .get(intended)
        .ok_or_else(|| AdviceError::UnknownEntity(intended.clone()))?;
    if role != Role::Subject {
        return Ok(FormAdvice {
            form: Form::CliticPronoun,
            rationale: AdviceRationale::CliticRole,
        });
    }
    if !compatible(planned, target).unwrap_or(false) {
        return Err(AdviceError::FeatureClash(intended.clone()));
    }

    let cf: Vec<_> = state.cf.iter().filter_map(|id| entities.get(id)).collect();
    let fits = |f: &MorphFeatures| -> Vec<&EntityId> {
        cf.iter()
            .filter(|e| compatible(f, e).unwrap_or(false))
            .map(|e| &e.id)
            .collect()
    };
    let center = state.reference_center();
    let is_center = center == Some(intended);

    if is_center && state.head() == Some(intended) {
        return Ok(FormAdvice {
            form: Form::NullSubject,
            rationale: AdviceRationale::Continuation,
        });
    }
    if fits(planned) == [intended] {
        return Ok(FormAdvice {
            form: Form::NullSubject,
            rationale: if is_center {
                AdviceRationale::Continuation
            } else {
                AdviceRationale::LicensedShift
            },
        });
    }
    if !is_center {
        // mirror the resolver: the pronoun's own features pick the default it
        // skips, agreement then narrows what is left
        let own = MorphFeatures::third_singular(Some(target.gender));
        let own = MorphFeatures {
            number: Some(target.number),
            ..own
        };
        let own_fits = fits(&own);
        let skipped = (own_fits.len() > 1).then(|| own_fits[0]);
        let both = fits(&MorphFeatures {
            gender: own.gender.or(planned.gender),
            number: own.number.or(planned.number),
            person: planned.person.or(own.person),
        });
        let lands_on = both
            .iter()
            .find(|id| Some(**id) != skipped)
            .or(both.first());
        if lands_on == Some(&intended) {
            return Ok(FormAdvice {
                form: Form::StrongPronoun,
                rationale: AdviceRationale::StrongShift,
            });
        }
    }
    Ok(FormAdvice {
        form: Form::ProperName,
        rationale: AdviceRationale::PronounUnavailable,
    })
}
