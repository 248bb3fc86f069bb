use std::path::PathBuf;

use parafis_core::streams::{
    inject_class_swap, metadata_path, write_csv, write_metadata, StreamSpec,
};

use crate::cli::GenerateArgs;
use crate::config::{DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV};
use crate::error::{CliError, CliResult};

/// Writes the stream and its sidecar; returns the CSV path.
pub fn generate(args: &GenerateArgs) -> CliResult<PathBuf> {
    let mut spec =
        StreamSpec::preset(&args.stream, args.seed).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(n) = args.length {
        spec.length = n;
    }
    let mut stream = spec.build()?;
    if !args.swap_at.is_empty() {
        let [a, b] = args.swap_classes[..] else {
            return Err(CliError::Config(
                "--swap-classes takes exactly two classes".into(),
            ));
        };
        inject_class_swap(&mut stream, &args.swap_at, a, b)?;
    }
    let out = args.out.clone().unwrap_or_else(|| {
        let dir = std::env::var_os(OUTPUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        dir.join(format!("{}-seed{}.csv", spec.name(), args.seed))
    });
    write_csv(&stream, &out).map_err(|e| CliError::Runtime(e.to_string()))?;
    write_metadata(&stream.meta, &metadata_path(&out))
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    println!(
        "wrote {} samples ({} features, {} classes) to {}",
        stream.len(),
        stream.meta.dim,
        stream.meta.classes,
        out.display()
    );
    Ok(out)
}
