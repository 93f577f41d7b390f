#include "seqcompact/jobs.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char **argv)
{
    CLI::App app{"seqcompact: sequential-compactness witnesses, dyadic codecs and FIP solving"};
    std::string job_path;
    std::string out_path;
    bool canonical = false;
    app.add_option("--job", job_path, "job document (JSON)")->required();
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_flag("--canonical", canonical, "suppress side-channel output (timing)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::ifstream in(job_path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot read job file " << job_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    auto t0 = std::chrono::steady_clock::now();
    auto outcome = seqcompact::run_job_text(buf.str());
    auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    auto text = outcome.report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << out_path << "\n";
            return 2;
        }
        out << text;
    }
    if (!canonical) std::cerr << "elapsed_ms " << elapsed << "\n";
    return outcome.exit_code;
}
