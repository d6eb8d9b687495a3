//! Maps errors to process exit codes.

use cospec::asymptotics::AsymptoticsError;
use cospec::cotree::CotreeError;
use cospec::enumeration::EnumerationError;
use cospec::graph::GraphError;
use cospec::mates::MatesError;
use cospec::threshold::ThresholdError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitClass {
    Success = 0,
    Internal = 1,
    Domain = 2,
    Input = 3,
}

impl ExitClass {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Problems with the command line or input files found by the CLI itself.
#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}:{line}: {msg}")]
    BadLine { path: String, line: usize, msg: String },
}

/// An acceptance check failed.
#[derive(Debug, thiserror::Error)]
#[error("{failed} acceptance check(s) failed")]
pub struct ChecksFailed {
    pub failed: usize,
}

fn mates_class(e: &MatesError) -> ExitClass {
    match e {
        MatesError::PatternAbsent
        | MatesError::NoBasePair
        | MatesError::AmbiguousBasePair(_)
        | MatesError::PreconditionViolated(_) => ExitClass::Domain,
        MatesError::Cotree(c) => cotree_class(c),
        MatesError::OrderMismatch { .. }
        | MatesError::CorpusIncomplete { .. }
        | MatesError::BudgetExceeded { .. }
        | MatesError::EmptyOrder
        | MatesError::MalformedCache(_)
        | MatesError::Graph(_) => ExitClass::Input,
    }
}

fn cotree_class(e: &CotreeError) -> ExitClass {
    match e {
        CotreeError::SyntaxError { .. } | CotreeError::UnaryInternalNode(_) | CotreeError::MultipleStarLeaves => {
            ExitClass::Input
        }
        _ => ExitClass::Domain,
    }
}

pub fn classify(err: &anyhow::Error) -> ExitClass {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<MatesError>() {
            return mates_class(e);
        }
        if let Some(e) = cause.downcast_ref::<CotreeError>() {
            return cotree_class(e);
        }
        if cause.is::<AsymptoticsError>() {
            return match cause.downcast_ref::<AsymptoticsError>() {
                Some(AsymptoticsError::Enumeration(_)) => ExitClass::Input,
                _ => ExitClass::Domain,
            };
        }
        if cause.is::<GraphError>()
            || cause.is::<ThresholdError>()
            || cause.is::<EnumerationError>()
            || cause.is::<UsageError>()
            || cause.is::<std::io::Error>()
            || cause.is::<serde_json::Error>()
            || cause.is::<clap::Error>()
        {
            return ExitClass::Input;
        }
    }
    ExitClass::Internal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_by_error_family() {
        let e = |x: anyhow::Error| classify(&x);
        assert_eq!(e(MatesError::PatternAbsent.into()), ExitClass::Domain);
        assert_eq!(e(CotreeError::NotACograph.into()), ExitClass::Domain);
        assert_eq!(e(MatesError::CorpusIncomplete { order: 9, expected: 2, found: 1 }.into()), ExitClass::Input);
        assert_eq!(e(anyhow::Error::from(CotreeError::UnaryInternalNode(0)).context("parsing")), ExitClass::Input);
        assert_eq!(e(UsageError::Invalid("x".into()).into()), ExitClass::Input);
        assert_eq!(e(AsymptoticsError::DomainError("x".into()).into()), ExitClass::Domain);
        assert_eq!(e(ChecksFailed { failed: 1 }.into()), ExitClass::Internal);
        assert_eq!(e(anyhow::anyhow!("boom")), ExitClass::Internal);
    }
}
