use std::fmt;

/// Failures of a run, each with its process exit status.
#[derive(Debug)]
pub enum HarnessError {
    /// Bad flags, config values or combinations; every problem found.
    Usage(Vec<String>),
    /// A numerical kernel refused or failed, with the experiment it ran for.
    Numeric {
        experiment: &'static str,
        source: freezelab_core::Error,
    },
    Io(String),
    /// `--help` or `--version` output, which is not a failure.
    Info(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Info(_) => 0,
            HarnessError::Usage(_) => 2,
            HarnessError::Numeric { .. } => 3,
            HarnessError::Io(_) => 4,
        }
    }

    pub(crate) fn from_clap(e: clap::Error) -> Self {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => HarnessError::Info(e.to_string()),
            _ => HarnessError::Usage(vec![e.to_string().trim_end().to_owned()]),
        }
    }

    pub(crate) fn numeric(experiment: &'static str) -> impl Fn(freezelab_core::Error) -> Self {
        move |source| HarnessError::Numeric { experiment, source }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Usage(msgs) => {
                write!(f, "usage error")?;
                for m in msgs {
                    write!(f, "\n  {m}")?;
                }
                Ok(())
            }
            HarnessError::Numeric { experiment, source } => write!(f, "{experiment}: {source}"),
            HarnessError::Io(msg) => write!(f, "i/o error: {msg}"),
            HarnessError::Info(text) => f.write_str(text),
        }
    }
}

impl std::error::Error for HarnessError {}
