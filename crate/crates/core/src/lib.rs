// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

pub mod cli;
pub mod error;
pub mod linalg;
pub mod nmr;
pub mod pipeline;
pub mod protocol;
pub mod report;
pub mod tomography;

pub use error::{QcsError, Result};
