// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    let code = qcs_core::cli::run_cli(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
