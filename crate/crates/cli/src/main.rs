fn main() {
    if let Some(n) = std::env::var("COARSE_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .expect("thread pool is configured once");
    }
    let code = coarse_lab_cli::args::main_with(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
