//! Run configuration, snapshot CSV files and JSON manifests.

mod config;
mod manifest;
mod snapshots;

pub use config::{IcKind, RunConfig, RunSetup};
pub use manifest::{
    check_manifest_schema, read_manifest, write_manifest, DecayFit, Manifest, SpeedFit,
    REQUIRED_CONFIG_KEYS, REQUIRED_KEYS,
};
pub use snapshots::{
    column_header, format_g6, format_value, read_profile_csv, read_snapshots_csv, write_columns,
    write_csv, write_snapshot_csv, SnapshotTable,
};
