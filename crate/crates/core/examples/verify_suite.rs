//! Running a verification suite from code and inspecting the report.

use extcalc::differential::FdMode;
use extcalc::verify::{self, Suite, SuiteConfig};

fn main() -> extcalc::Result<()> {
    let config = SuiteConfig { suite: Suite::Curl, fd: FdMode::Fd4, ..Default::default() };
    let report = verify::run_suite(&config)?;
    print!("{}", report.text_summary());
    let worst = report.checks.iter().max_by(|a, b| (a.measured() / a.tolerance).total_cmp(&(b.measured() / b.tolerance)));
    if let Some(c) = worst {
        println!("tightest margin: {} at {:.1e} of {:.1e}", c.id, c.measured(), c.tolerance);
    }
    Ok(())
}
