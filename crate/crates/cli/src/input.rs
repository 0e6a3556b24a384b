use std::path::Path;
use std::sync::Arc;

use chainrank::dsl;
use chainrank::group::{genfile, FinGroup, MarkedGroup};

use crate::CliError;

pub struct Input {
    pub group: Arc<FinGroup>,
    /// Canonical form of the expression; `None` for generator files.
    pub expression: Option<String>,
}

/// Reads a generator file if `arg` names one, and otherwise parses it as an
/// expression.
pub fn load(arg: &str, max_order: usize) -> Result<Input, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        let group = genfile::load(&text, max_order).map_err(|e| CliError::from(e).context(arg))?;
        return Ok(Input {
            group: Arc::new(group),
            expression: None,
        });
    }
    if arg.contains(['/', '.']) {
        return Err(CliError::input(format!("no such generator file: {arg}")));
    }
    let expr = dsl::parse(arg)?;
    let group = dsl::eval(&expr, max_order)?;
    Ok(Input {
        group,
        expression: Some(expr.to_string()),
    })
}

pub fn marking(group: Arc<FinGroup>, seed: Option<u64>) -> MarkedGroup {
    let m = MarkedGroup::default_marking(group);
    match seed {
        Some(s) => m.remark(s),
        None => m,
    }
}
