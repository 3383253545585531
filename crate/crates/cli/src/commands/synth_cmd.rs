use crate::args::SynthArgs;
use crate::synth::{generate, write_snap_files, SynthConfig};
use crate::CmdError;

pub fn run(args: &SynthArgs) -> Result<(), CmdError> {
    if args.nodes < 10 {
        return Err(CmdError::Usage("--nodes must be at least 10".into()));
    }
    if args.cities == 0 {
        return Err(CmdError::Usage("--cities must be at least 1".into()));
    }
    let net = generate(&SynthConfig {
        nodes: args.nodes,
        cities: args.cities,
        seed: args.seed,
    });
    write_snap_files(&net, &args.out_edges, &args.out_checkins)
        .map_err(|e| CmdError::Runtime(format!("write synthetic files: {e}")))?;
    println!(
        "synth: {} nodes, {} edges, {} check-ins -> {}, {}",
        args.nodes,
        net.edges.len(),
        net.checkins.len(),
        args.out_edges.display(),
        args.out_checkins.display()
    );
    Ok(())
}
