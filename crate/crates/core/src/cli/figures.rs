use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use super::config::{Format, ScenarioConfig};
use super::output::Sink;
use super::tasks::run_task;
use super::CliError;

/// Scenario configs shipped with the tool, by name.
pub const BUILTIN: &[(&str, &str)] = &[
    ("fig2", include_str!("../../assets/fig2.json")),
    ("fig2d", include_str!("../../assets/fig2d.json")),
    ("fig3", include_str!("../../assets/fig3.json")),
    ("fig4", include_str!("../../assets/fig4.json")),
    ("fig4c", include_str!("../../assets/fig4c.json")),
    ("chain", include_str!("../../assets/chain.json")),
    ("unstable", include_str!("../../assets/unstable.json")),
];

/// Names of the built-in configs that back a figure.
pub const FIGURE_CONFIGS: &[&str] = &["fig2", "fig2d", "fig3", "fig4", "fig4c", "chain"];

pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| serde_json::from_str(src).expect("built-in config is valid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FigureSet {
    Fig2,
    Fig3,
    Fig4,
    All,
}

impl FigureSet {
    fn parts(self) -> Vec<(&'static str, &'static [&'static str], &'static str)> {
        let fig2: (&str, &[&str], &str) = ("fig2", &["fig2", "fig2d"], FIG2_GP);
        let fig3: (&str, &[&str], &str) = ("fig3", &["fig3"], FIG3_GP);
        let fig4: (&str, &[&str], &str) = ("fig4", &["fig4", "fig4c"], FIG4_GP);
        match self {
            FigureSet::Fig2 => vec![fig2],
            FigureSet::Fig3 => vec![fig3],
            FigureSet::Fig4 => vec![fig4],
            FigureSet::All => vec![fig2, fig3, fig4],
        }
    }
}

/// Writes the data behind each panel plus a gnuplot stub (CSV output only).
pub fn generate(which: FigureSet, dir: &Path, format: Format) -> Result<Vec<std::path::PathBuf>, CliError> {
    let mut written = Vec::new();
    for (name, configs, script) in which.parts() {
        for c in configs {
            let cfg = builtin(c).expect("listed config exists");
            let task = cfg.task.clone().expect("built-in configs carry a task");
            let stem = cfg.output.stem.clone().unwrap_or_else(|| c.to_string());
            let sc = cfg.resolve()?;
            let mut sink = Sink::new(dir.to_path_buf(), stem, format);
            run_task(&sc, &task, &mut sink, None)?;
            written.extend_from_slice(sink.written());
        }
        if format == Format::Csv {
            let mut sink = Sink::new(dir.to_path_buf(), name.to_string(), format);
            sink.text(&format!("{name}.gp"), script)?;
            written.extend_from_slice(sink.written());
        }
    }
    Ok(written)
}

const FIG2_GP: &str = concat!(
    "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n",
    "set multiplot layout 2,2\n",
    "set xlabel 'omega / omega_b'\n",
    "do for [k in '0.01 1 100'] {\n",
    "  plot 'fig2.csv' using 'omega':'T_a+@modes.0.kappa='.k with lines, \\\n",
    "       '' using 'omega':'T_b+@modes.0.kappa='.k with lines\n",
    "}\n",
    "set xlabel 'theta'\n",
    "plot 'fig2d_omega_0.csv' using 'theta_0':'R_ab' with lines title 'omega = 0', \\\n",
    "     'fig2d_omega_1.csv' using 'theta_0':'R_ab' with lines title 'omega = omega_b'\n",
    "unset multiplot\n",
);

const FIG3_GP: &str = concat!(
    "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n",
    "set multiplot layout 1,2\n",
    "set xlabel 'theta_m'\nset ylabel 'theta_c'\n",
    "splot 'fig3_omega_0.csv' using 'theta_0':'theta_1':'R_mb' with points pt 0, \\\n",
    "      '' using 'theta_0':'theta_1':'R_bc' with points pt 0\n",
    "splot 'fig3_omega_1.csv' using 'theta_0':'theta_1':'R_mb' with points pt 0, \\\n",
    "      '' using 'theta_0':'theta_1':'R_bc' with points pt 0\n",
    "unset multiplot\n",
);

const FIG4_GP: &str = concat!(
    "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n",
    "set multiplot layout 1,3\n",
    "set xlabel 'Delta_m'\nset ylabel 'Delta_c'\n",
    "plot 'fig4.csv' using 'delta_m':'delta_c':'lg_f' with image\n",
    "plot 'fig4.csv' using 'delta_m':'delta_c':'lg_s_ap' with image\n",
    "set xlabel 'omega / omega_b'\nunset ylabel\n",
    "plot 'fig4c.csv' using 'omega':'S_SNR' with lines title 'CS', \\\n",
    "     '' using 'omega':'S_SNR_ics' with lines title 'ICS'\n",
    "unset multiplot\n",
);
