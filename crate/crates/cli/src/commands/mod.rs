pub mod detect;
pub mod ingest;
pub mod oracle;
pub mod rank;
pub mod sample;
pub mod sweep;
pub mod synth_cmd;
