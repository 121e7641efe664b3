use std::io::Write as _;

use anyhow::Result;
use prepnmf::uniq::uniqueness_report;

use crate::args::UniquenessArgs;
use crate::input;
use crate::report::envelope;

pub fn run(args: &UniquenessArgs) -> Result<()> {
    let (m, info) = input::load(&args.input)?;
    let rep = uniqueness_report(&m, args.rank, args.zero_tol)?;
    let summary = format!(
        "rank {}: {} ({} certified columns)",
        rep.r,
        rep.verdict,
        rep.vertex_columns.len()
    );
    let env = envelope("uniqueness", info, rep);
    match &args.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                input::ensure_dir(dir)?;
            }
            input::write_json(path, &env)?;
            println!("{summary}");
        }
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            match writeln!(out, "{}", serde_json::to_string_pretty(&env)?) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}
