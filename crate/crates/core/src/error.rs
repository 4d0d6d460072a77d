use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
  #[error("validation failed: {0}")]
  Validation(String),
  #[error("operands live over different groups")]
  MixedGroups,
  #[error("not a subgroup: {0:?}")]
  NotSubgroup(Vec<usize>),
  #[error("group of order {0} exceeds the enumeration bound {1}")]
  GroupTooLarge(usize, usize),
  #[error("map is not levelwise injective: {0}")]
  NotInjective(String),
  #[error("mismatched base spaces")]
  MismatchedBase,
  #[error("unsupported input: {0}")]
  Unsupported(String),
  #[error("check failed: {0}")]
  CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
  Err(Error::Validation(msg.into()))
}
