//! File formats: overring configs, Diophantine system files, and
//! analysis reports.
//!
//! Everything is plain JSON with small integers.  A group is
//! `{"rank": r, "torsion": [d1, ...]}`; an element is a flat integer
//! list, free coordinates first, then torsion coordinates.  A config is
//! `{"group": ..., "kept_classes": [...], "inverted_classes": [...],
//! "finitely_generated": bool?}`.  A system is `{"coeffs": [[...]],
//! "row_moduli": [...], "var_domains": [...], "target": [...]}` with
//! domains spelled `"nonnegative"` or `"free_integer"`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{FgAbelianGroup, GroupElement};
use crate::dedekind::{
    AlmostWellCentered, AnalysisReport, ClassCertificate, GeneratorCertificate, Localization,
    ModelError, MultipleCertificate, OverringConfig, WellCentered,
};
use crate::diophantine::{DiophantineError, IntersectionGenerator, LinearSystem, VarDomain};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{location}: {detail}")]
    Semantic { location: String, detail: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    System(#[from] DiophantineError),
    #[error("integer out of range at {0}")]
    OutOfRange(String),
}

fn semantic(location: impl Into<String>, detail: impl Into<String>) -> FormatError {
    FormatError::Semantic {
        location: location.into(),
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupDto {
    pub rank: u32,
    pub torsion: Vec<i64>,
}

impl GroupDto {
    pub fn to_group(&self) -> Result<FgAbelianGroup, FormatError> {
        FgAbelianGroup::new(self.rank as usize, self.torsion.clone())
            .map_err(|e| semantic("group", e.to_string()))
    }

    pub fn from_group(g: &FgAbelianGroup) -> Result<Self, FormatError> {
        let torsion = g
            .torsion_moduli()
            .iter()
            .map(|d| {
                d.to_i64()
                    .ok_or_else(|| FormatError::OutOfRange("group.torsion".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupDto {
            rank: g.rank() as u32,
            torsion,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConfigDto {
    pub group: GroupDto,
    pub kept_classes: Vec<Vec<i64>>,
    pub inverted_classes: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finitely_generated: Option<bool>,
}

fn element_from_dto(
    g: &FgAbelianGroup,
    coords: &[i64],
    location: String,
) -> Result<GroupElement, FormatError> {
    g.element_from_flat(coords)
        .map_err(|e| semantic(location, e.to_string()))
}

fn element_to_dto(e: &GroupElement, location: &str) -> Result<Vec<i64>, FormatError> {
    e.flat()
        .iter()
        .map(|c| {
            c.to_i64()
                .ok_or_else(|| FormatError::OutOfRange(location.to_string()))
        })
        .collect()
}

impl ConfigDto {
    pub fn to_config(&self) -> Result<OverringConfig, FormatError> {
        let group = self.group.to_group()?;
        let kept = self
            .kept_classes
            .iter()
            .enumerate()
            .map(|(i, c)| element_from_dto(&group, c, format!("kept_classes[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let inverted = self
            .inverted_classes
            .iter()
            .enumerate()
            .map(|(i, c)| element_from_dto(&group, c, format!("inverted_classes[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OverringConfig::new(
            group,
            kept,
            inverted,
            self.finitely_generated,
        )?)
    }

    pub fn from_config(config: &OverringConfig) -> Result<Self, FormatError> {
        Ok(ConfigDto {
            group: GroupDto::from_group(config.group())?,
            kept_classes: config
                .kept_classes()
                .iter()
                .map(|c| element_to_dto(c, "kept_classes"))
                .collect::<Result<Vec<_>, _>>()?,
            inverted_classes: config
                .inverted_classes()
                .iter()
                .map(|c| element_to_dto(c, "inverted_classes"))
                .collect::<Result<Vec<_>, _>>()?,
            finitely_generated: config.finitely_generated(),
        })
    }
}

/// Parses a config file (JSON).
pub fn parse_config(text: &str) -> Result<OverringConfig, FormatError> {
    let dto: ConfigDto = serde_json::from_str(text)?;
    dto.to_config()
}

/// Renders a config as JSON.
pub fn render_config(config: &OverringConfig) -> Result<String, FormatError> {
    let dto = ConfigDto::from_config(config)?;
    Ok(serde_json::to_string_pretty(&dto).expect("DTOs serialize"))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SystemDto {
    pub coeffs: Vec<Vec<i64>>,
    pub row_moduli: Vec<i64>,
    pub var_domains: Vec<VarDomain>,
    pub target: Vec<i64>,
}

impl SystemDto {
    pub fn to_system(&self) -> Result<LinearSystem, FormatError> {
        let rows: Vec<&[i64]> = self.coeffs.iter().map(Vec::as_slice).collect();
        Ok(LinearSystem::from_i64(
            &rows,
            &self.row_moduli,
            self.var_domains.clone(),
            &self.target,
        )?)
    }
}

/// Parses a Diophantine system file (JSON).
pub fn parse_system(text: &str) -> Result<LinearSystem, FormatError> {
    let dto: SystemDto = serde_json::from_str(text)?;
    dto.to_system()
}

fn bigints_to_dto(values: &[BigInt], location: &str) -> Result<Vec<i64>, FormatError> {
    values
        .iter()
        .map(|v| {
            v.to_i64()
                .ok_or_else(|| FormatError::OutOfRange(location.to_string()))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IntersectionGeneratorDto {
    pub element: Vec<i64>,
    pub monoid_exponents: Vec<i64>,
    pub group_coefficients: Vec<i64>,
}

impl IntersectionGeneratorDto {
    fn from_generator(g: &IntersectionGenerator) -> Result<Self, FormatError> {
        Ok(IntersectionGeneratorDto {
            element: element_to_dto(&g.element, "generator.element")?,
            monoid_exponents: bigints_to_dto(&g.monoid_exponents, "generator.monoid_exponents")?,
            group_coefficients: bigints_to_dto(
                &g.group_coefficients,
                "generator.group_coefficients",
            )?,
        })
    }

    fn to_generator(&self, group: &FgAbelianGroup) -> Result<IntersectionGenerator, FormatError> {
        Ok(IntersectionGenerator {
            element: element_from_dto(group, &self.element, "generator.element".into())?,
            monoid_exponents: self
                .monoid_exponents
                .iter()
                .map(|&x| BigInt::from(x))
                .collect(),
            group_coefficients: self
                .group_coefficients
                .iter()
                .map(|&x| BigInt::from(x))
                .collect(),
        })
    }
}

/// One predicate outcome in the machine-readable report section.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PredicateDto {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<IntersectionGeneratorDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_class: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateDto {
    /// The class or generator element the certificate is about.
    pub element: Vec<i64>,
    /// Positive multiple, for the almost-well-centered predicate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    /// Exponents over the inverted classes.
    pub exponents: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<IntersectionGeneratorDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportDto {
    pub config: ConfigDto,
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_realizable: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub localization: Option<PredicateDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub well_centered: Option<PredicateDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub almost_well_centered: Option<PredicateDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overring_class_group: Option<GroupDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_pid: Option<bool>,
}

impl ReportDto {
    pub fn from_report(
        config: &OverringConfig,
        report: &AnalysisReport,
    ) -> Result<Self, FormatError> {
        let localization = match &report.localization {
            None => None,
            Some(Localization::Yes { certificates }) => Some(PredicateDto {
                verdict: "Yes".into(),
                certificates: certificates
                    .iter()
                    .map(|c| {
                        Ok(CertificateDto {
                            element: element_to_dto(&c.class, "localization certificate")?,
                            n: None,
                            exponents: bigints_to_dto(&c.exponents, "localization certificate")?,
                            generator: None,
                        })
                    })
                    .collect::<Result<Vec<_>, FormatError>>()?,
                counterexample: None,
                witness_class: None,
            }),
            Some(Localization::No { witness }) => Some(PredicateDto {
                verdict: "No".into(),
                certificates: Vec::new(),
                counterexample: None,
                witness_class: Some(element_to_dto(witness, "localization witness")?),
            }),
        };
        let well_centered = match &report.well_centered {
            None => None,
            Some(WellCentered::Yes { certificates }) => Some(PredicateDto {
                verdict: "Yes".into(),
                certificates: certificates
                    .iter()
                    .map(|c| {
                        Ok(CertificateDto {
                            element: element_to_dto(
                                &c.generator.element,
                                "well-centered certificate",
                            )?,
                            n: None,
                            exponents: bigints_to_dto(&c.exponents, "well-centered certificate")?,
                            generator: Some(IntersectionGeneratorDto::from_generator(
                                &c.generator,
                            )?),
                        })
                    })
                    .collect::<Result<Vec<_>, FormatError>>()?,
                counterexample: None,
                witness_class: None,
            }),
            Some(WellCentered::No { counterexample }) => Some(PredicateDto {
                verdict: "No".into(),
                certificates: Vec::new(),
                counterexample: Some(IntersectionGeneratorDto::from_generator(counterexample)?),
                witness_class: None,
            }),
        };
        let almost = match &report.almost_well_centered {
            None => None,
            Some(AlmostWellCentered::Yes { certificates }) => Some(PredicateDto {
                verdict: "Yes".into(),
                certificates: certificates
                    .iter()
                    .map(|c| {
                        Ok(CertificateDto {
                            element: element_to_dto(&c.generator.element, "multiple certificate")?,
                            n: Some(
                                c.n.to_i64()
                                    .ok_or_else(|| FormatError::OutOfRange("n".into()))?,
                            ),
                            exponents: bigints_to_dto(&c.exponents, "multiple certificate")?,
                            generator: Some(IntersectionGeneratorDto::from_generator(
                                &c.generator,
                            )?),
                        })
                    })
                    .collect::<Result<Vec<_>, FormatError>>()?,
                counterexample: None,
                witness_class: None,
            }),
            Some(AlmostWellCentered::No { counterexample }) => Some(PredicateDto {
                verdict: "No".into(),
                certificates: Vec::new(),
                counterexample: Some(IntersectionGeneratorDto::from_generator(counterexample)?),
                witness_class: None,
            }),
        };
        Ok(ReportDto {
            config: ConfigDto::from_config(config)?,
            valid: report.valid,
            not_realizable: report
                .not_realizable
                .as_ref()
                .map(|e| element_to_dto(e, "not_realizable"))
                .transpose()?,
            localization,
            well_centered,
            almost_well_centered: almost,
            overring_class_group: report
                .overring_class_group
                .as_ref()
                .map(GroupDto::from_group)
                .transpose()?,
            is_pid: report.is_pid,
        })
    }

    pub fn to_report(&self) -> Result<(OverringConfig, AnalysisReport), FormatError> {
        let config = self.config.to_config()?;
        let group = config.group().clone();
        let parse_predicate = |dto: &Option<PredicateDto>,
                               kind: &str|
         -> Result<Option<PredicateParts>, FormatError> {
            let Some(dto) = dto else { return Ok(None) };
            match dto.verdict.as_str() {
                "Yes" => {
                    let mut certs = Vec::new();
                    for c in &dto.certificates {
                        certs.push(CertificateParts {
                            element: element_from_dto(
                                &group,
                                &c.element,
                                format!("{kind} certificate"),
                            )?,
                            n: c.n.map(BigInt::from),
                            exponents: c.exponents.iter().map(|&x| BigInt::from(x)).collect(),
                            generator: c
                                .generator
                                .as_ref()
                                .map(|g| g.to_generator(&group))
                                .transpose()?,
                        });
                    }
                    Ok(Some(PredicateParts::Yes(certs)))
                }
                "No" => {
                    let counterexample = dto
                        .counterexample
                        .as_ref()
                        .map(|g| g.to_generator(&group))
                        .transpose()?;
                    let witness = dto
                        .witness_class
                        .as_ref()
                        .map(|w| element_from_dto(&group, w, format!("{kind} witness")))
                        .transpose()?;
                    Ok(Some(PredicateParts::No {
                        counterexample,
                        witness,
                    }))
                }
                other => Err(semantic(kind, format!("unknown verdict {other:?}"))),
            }
        };

        let localization = match parse_predicate(&self.localization, "localization")? {
            None => None,
            Some(PredicateParts::Yes(certs)) => Some(Localization::Yes {
                certificates: certs
                    .into_iter()
                    .map(|c| ClassCertificate {
                        class: c.element,
                        exponents: c.exponents,
                    })
                    .collect(),
            }),
            Some(PredicateParts::No { witness, .. }) => Some(Localization::No {
                witness: witness
                    .ok_or_else(|| semantic("localization", "No verdict without witness_class"))?,
            }),
        };
        let well_centered = match parse_predicate(&self.well_centered, "well_centered")? {
            None => None,
            Some(PredicateParts::Yes(certs)) => {
                let mut out = Vec::new();
                for c in certs {
                    out.push(GeneratorCertificate {
                        generator: c.generator.ok_or_else(|| {
                            semantic("well_centered", "certificate without generator")
                        })?,
                        exponents: c.exponents,
                    });
                }
                Some(WellCentered::Yes { certificates: out })
            }
            Some(PredicateParts::No { counterexample, .. }) => Some(WellCentered::No {
                counterexample: counterexample.ok_or_else(|| {
                    semantic("well_centered", "No verdict without counterexample")
                })?,
            }),
        };
        let almost_well_centered =
            match parse_predicate(&self.almost_well_centered, "almost_well_centered")? {
                None => None,
                Some(PredicateParts::Yes(certs)) => {
                    let mut out = Vec::new();
                    for c in certs {
                        out.push(MultipleCertificate {
                            generator: c.generator.ok_or_else(|| {
                                semantic("almost_well_centered", "certificate without generator")
                            })?,
                            n: c.n.ok_or_else(|| {
                                semantic("almost_well_centered", "certificate without n")
                            })?,
                            exponents: c.exponents,
                        });
                    }
                    Some(AlmostWellCentered::Yes { certificates: out })
                }
                Some(PredicateParts::No { counterexample, .. }) => Some(AlmostWellCentered::No {
                    counterexample: counterexample.ok_or_else(|| {
                        semantic("almost_well_centered", "No verdict without counterexample")
                    })?,
                }),
            };
        let report = AnalysisReport {
            valid: self.valid,
            not_realizable: self
                .not_realizable
                .as_ref()
                .map(|e| element_from_dto(&group, e, "not_realizable".into()))
                .transpose()?,
            localization,
            well_centered,
            almost_well_centered,
            overring_class_group: self
                .overring_class_group
                .as_ref()
                .map(GroupDto::to_group)
                .transpose()?,
            is_pid: self.is_pid,
        };
        Ok((config, report))
    }
}

struct CertificateParts {
    element: GroupElement,
    n: Option<BigInt>,
    exponents: Vec<BigInt>,
    generator: Option<IntersectionGenerator>,
}

enum PredicateParts {
    Yes(Vec<CertificateParts>),
    No {
        counterexample: Option<IntersectionGenerator>,
        witness: Option<GroupElement>,
    },
}

fn verdict_line(name: &str, dto: &Option<PredicateDto>) -> String {
    match dto {
        None => format!("{name}: not evaluated"),
        Some(p) if p.verdict == "Yes" => format!("{name}: Yes"),
        Some(p) => {
            if let Some(w) = &p.witness_class {
                format!("{name}: No (witness class {w:?})")
            } else if let Some(c) = &p.counterexample {
                format!("{name}: No (counterexample class {:?})", c.element)
            } else {
                format!("{name}: No")
            }
        }
    }
}

/// Renders the full report: a human-readable summary followed by a
/// machine-readable JSON section.
pub fn render_report(
    config: &OverringConfig,
    report: &AnalysisReport,
) -> Result<String, FormatError> {
    let dto = ReportDto::from_report(config, report)?;
    let mut out = String::new();
    out.push_str("overring analysis\n");
    out.push_str("-----------------\n");
    out.push_str(&format!("class group: {}\n", config.group()));
    let kept: Vec<String> = config
        .kept_classes()
        .iter()
        .map(|c| c.to_string())
        .collect();
    let inverted: Vec<String> = config
        .inverted_classes()
        .iter()
        .map(|c| c.to_string())
        .collect();
    out.push_str(&format!("kept classes: {{{}}}\n", kept.join(", ")));
    out.push_str(&format!("inverted classes: {{{}}}\n", inverted.join(", ")));
    if let Some(fg) = config.finitely_generated() {
        out.push_str(&format!("finitely generated: {fg}\n"));
    }
    if !report.valid {
        out.push_str("valid: no\n");
        if let Some(missing) = &report.not_realizable {
            out.push_str(&format!(
                "not realizable: generator {missing} is not a nonnegative combination of the classes\n"
            ));
        }
    } else {
        out.push_str("valid: yes\n");
        out.push_str(&format!(
            "{}\n",
            verdict_line("localization", &dto.localization)
        ));
        out.push_str(&format!(
            "{}\n",
            verdict_line("well-centered", &dto.well_centered)
        ));
        out.push_str(&format!(
            "{}\n",
            verdict_line("almost well-centered", &dto.almost_well_centered)
        ));
        if let Some(g) = &report.overring_class_group {
            out.push_str(&format!("overring class group: {g}\n"));
        }
        if let Some(pid) = report.is_pid {
            out.push_str(&format!(
                "overring is a PID: {}\n",
                if pid { "yes" } else { "no" }
            ));
        }
    }
    out.push_str("\nmachine-readable:\n");
    out.push_str(&serde_json::to_string_pretty(&dto).expect("DTOs serialize"));
    out.push('\n');
    Ok(out)
}

/// Extracts and parses the machine-readable section of a rendered report.
pub fn parse_report(text: &str) -> Result<(OverringConfig, AnalysisReport), FormatError> {
    let marker = "machine-readable:\n";
    let json = match text.find(marker) {
        Some(idx) => &text[idx + marker.len()..],
        None => text,
    };
    let dto: ReportDto = serde_json::from_str(json)?;
    dto.to_report()
}
