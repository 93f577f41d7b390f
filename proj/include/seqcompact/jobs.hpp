#ifndef SEQCOMPACT_JOBS_HPP
#define SEQCOMPACT_JOBS_HPP

// Job documents: {"command", "input", "params"} in, a report document and an
// exit status out (0 success, 1 mathematical failure, 2 input error).

#include "generators.hpp"
#include "serialize.hpp"

#include <future>

namespace seqcompact
{

struct JobOutcome {
    Json report;
    int exit_code{0};
};

namespace job_detail
{

using json_detail::as_uint;
using json_detail::fail;

struct Params {
    const Json &j;

    bool has(const char *k) const { return j.contains(k); }
    std::uint64_t uint_or(const char *k, std::uint64_t d) const { return has(k) ? as_uint(j[k], k) : d; }
    Dyadic dyadic_or(const char *k, Dyadic d) const { return has(k) ? dyadic_from_json(j[k]) : d; }
};

inline Json finish(const std::string &command, bool ok, Json result)
{
    return Json{{"command", command}, {"status", ok ? "ok" : "failed"}, {"result", std::move(result)}};
}

inline const Json &input_of(const Json &job)
{
    if (!job.contains("input")) fail("job: missing field 'input'");
    return job["input"];
}

inline JobOutcome outcome(Json report)
{
    int code = report["status"] == "ok" ? 0 : 1;
    return {std::move(report), code};
}

inline JobOutcome cmd_validate(const Json &job)
{
    auto s = fps_from_json(input_of(job));
    auto v = fps_validate(s);
    return outcome(finish("validate", v.empty(), Json{{"valid", v.empty()}, {"violations", v}}));
}

inline JobOutcome cmd_extract(const Json &job, const Params &p)
{
    auto s = fps_from_json(input_of(job));
    if (p.has("horizon")) {
        require_valid(s);
        auto w = empirical_extract(as_black_box(s), p.uint_or("horizon", 0), p.dyadic_or("tolerance", Dyadic::pow2_inverse(10)));
        return outcome(finish("extract", true, Json{{"witness", to_json(w)}}));
    }
    return outcome(finish("extract", true, Json{{"witness", to_json(extract(s))}}));
}

inline JobOutcome cmd_encode(const Json &job)
{
    auto v = vector_from_json(input_of(job));
    auto f = encode_b1plus(v);
    Json sizes = Json::array();
    for (std::uint64_t n = 0; n < f.sparse_height(); ++n) sizes.push_back(f.level(n).size());
    return outcome(finish("encode", true, Json{{"family", to_json(f)}, {"level_sizes", sizes}, {"mass", to_json(level_mass(f))}}));
}

inline JobOutcome cmd_decode(const Json &job, const Params &p)
{
    auto f = bit_family_from_json(input_of(job));
    auto d = decode(f, p.uint_or("up_to", f.sparse_height()));
    return outcome(finish("decode", true,
                          Json{{"value", to_json(d.value)},
                               {"error_bound", to_json(d.error_bound)},
                               {"exact", d.exact},
                               {"limit", to_json(decode_limit(f))}}));
}

inline JobOutcome cmd_hp_map(const Json &job, const Params &p)
{
    auto v = vector_from_json(input_of(job));
    auto e = p.has("p") ? RationalExponent::parse(json_detail::as_string(p.j["p"], "p")) : RationalExponent::make(2, 1);
    auto precision = p.uint_or("precision", 24);
    Json image = Json::object();
    for (const auto &[l, i] : h_p(v, e, precision)) image[l.to_string()] = to_json(i);
    return outcome(finish("hp-map", true, Json{{"p", e.to_string()}, {"precision", precision}, {"image", image}}));
}

inline JobOutcome cmd_fip_check(const Json &job)
{
    auto r = fip_check(fip_problem_from_json(input_of(job)));
    return outcome(finish("fip-check", r.satisfiable, to_json(r)));
}

inline JobOutcome cmd_fip_solve(const Json &job)
{
    auto prob = fip_problem_from_json(input_of(job));
    auto check = fip_check(prob);
    if (!check.satisfiable) return outcome(finish("fip-solve", false, Json{{"certificate", to_json(check)}}));
    return outcome(finish("fip-solve", true, to_json(fip_solve(prob))));
}

inline JobOutcome cmd_verify(const Json &job, const Params &p)
{
    auto s = fps_from_json(input_of(job));
    auto w = extract(s);
    if (p.has("claimed_limit")) w.limit = point_from_json(p.j["claimed_limit"], s.space);
    std::vector<Coordinate> coords;
    if (p.has("coords"))
        for (const auto &c : json_detail::as_array(p.j["coords"], "coords")) coords.push_back(coordinate_from_json(c));
    else
        coords = mentioned_coordinates(s, p.uint_or("fresh_count", 20));
    auto r = check_convergence(s, w, coords, p.dyadic_or("epsilon", Dyadic::pow2_inverse(10)), p.uint_or("depth", 100));
    return outcome(finish("verify", r.pass, Json{{"witness", to_json(w)}, {"convergence", to_json(r)}}));
}

inline JobOutcome cmd_cross_check(const Json &job, const Params &p)
{
    if (job.contains("input")) {
        auto r = cross_check(fps_from_json(job["input"]));
        return outcome(finish("cross-check", r.agree, to_json(r)));
    }
    auto seed = p.uint_or("seed", 0);
    auto count = p.uint_or("count", 100);
    Rng rng(seed);
    std::vector<FPS> streams;
    for (std::uint64_t i = 0; i < 2 * count; ++i) streams.push_back(random_ball_fps(rng, i >= count));
    // instances are independent; checked in parallel, reported in order
    std::vector<std::future<CrossCheckReport>> running;
    for (const auto &s : streams) running.push_back(std::async(std::launch::async, [&s] { return cross_check(s); }));
    Json bad = Json::array();
    std::uint64_t agree = 0;
    for (std::uint64_t i = 0; i < streams.size(); ++i) {
        const auto &s = streams[i];
        auto r = running[i].get();
        if (r.agree)
            ++agree;
        else
            bad.push_back(Json{{"instance", i}, {"stream", to_json(s)}, {"report", to_json(r)}});
    }
    return outcome(finish("cross-check", bad.empty(),
                          Json{{"seed", seed}, {"instances", 2 * count}, {"agreements", agree}, {"disagreements", bad}}));
}

} // namespace job_detail

inline JobOutcome run_job(const Json &job);

namespace job_detail
{

inline JobOutcome cmd_batch(const Json &job)
{
    if (!job.contains("jobs")) fail("batch: missing field 'jobs'");
    const auto &jobs = json_detail::as_array(job["jobs"], "batch.jobs");
    std::vector<std::future<JobOutcome>> running;
    for (const auto &j : jobs) running.push_back(std::async(std::launch::async, [&j] { return run_job(j); }));
    Json reports = Json::array();
    int code = 0;
    for (auto &f : running) {
        auto o = f.get();
        code = std::max(code, o.exit_code);
        reports.push_back(std::move(o.report));
    }
    const char *status = code == 0 ? "ok" : code == 1 ? "failed" : "error";
    return {Json{{"command", "batch"}, {"status", status}, {"reports", std::move(reports)}}, code};
}

inline JobOutcome error_outcome(const std::string &command, const std::string &code, const std::string &message)
{
    bool math = code == error_name(ErrorCode::Unsatisfiable);
    return {Json{{"command", command}, {"status", math ? "failed" : "error"}, {"error", Json{{"code", code}, {"message", message}}}},
            math ? 1 : 2};
}

} // namespace job_detail

inline JobOutcome run_job(const Json &job)
{
    using namespace job_detail;
    std::string command = "?";
    try {
        json_detail::only_fields(job, {"command", "input", "params", "jobs"}, "job");
        command = json_detail::as_string(json_detail::field(job, "command", "job"), "job.command");
        static const Json no_params = Json::object();
        const Json &pj = job.contains("params") ? job["params"] : no_params;
        json_detail::only_fields(pj,
                                 {"precision", "depth", "epsilon", "coords", "horizon", "tolerance", "seed", "count",
                                  "up_to", "p", "claimed_limit", "fresh_count"},
                                 "params");
        Params p{pj};
        if (command != "batch" && job.contains("jobs")) fail("job: 'jobs' is only valid for batch");
        if (command == "validate") return cmd_validate(job);
        if (command == "extract") return cmd_extract(job, p);
        if (command == "encode") return cmd_encode(job);
        if (command == "decode") return cmd_decode(job, p);
        if (command == "hp-map") return cmd_hp_map(job, p);
        if (command == "fip-check") return cmd_fip_check(job);
        if (command == "fip-solve") return cmd_fip_solve(job);
        if (command == "verify") return cmd_verify(job, p);
        if (command == "cross-check") return cmd_cross_check(job, p);
        if (command == "batch") return cmd_batch(job);
        fail("job: unknown command '" + command + "'");
    } catch (const Error &e) {
        return error_outcome(command, error_name(e.code()), e.what());
    } catch (const nlohmann::json::exception &e) {
        return error_outcome(command, error_name(ErrorCode::ParseError), e.what());
    }
}

/// Parses `text` as a job document and runs it.
inline JobOutcome run_job_text(const std::string &text)
{
    Json job;
    try {
        job = Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        return job_detail::error_outcome("?", error_name(ErrorCode::ParseError), e.what());
    }
    return run_job(job);
}

} // namespace seqcompact

#endif
