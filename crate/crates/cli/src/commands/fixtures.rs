use anyhow::Result;
use prepnmf::fixtures;
use prepnmf::io::{write_matrix, MatrixFormat};

use crate::args::FixturesArgs;

pub fn run(args: &FixturesArgs) -> Result<()> {
    match &args.name {
        None => {
            for name in fixtures::names() {
                let (r, c) = fixtures::load(name)?.shape();
                println!("{name:<22} {r}x{c}");
            }
        }
        Some(name) => {
            let m = fixtures::load(name)?;
            match &args.out {
                Some(path) => write_matrix(path, &m, args.format.map(Into::into))?,
                None => {
                    let text = match args.format.map(MatrixFormat::from) {
                        Some(MatrixFormat::MatrixMarket) => prepnmf::io::to_matrix_market(&m),
                        _ => prepnmf::io::to_csv(&m),
                    };
                    print!("{text}");
                }
            }
        }
    }
    Ok(())
}
