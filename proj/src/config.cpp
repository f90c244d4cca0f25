#include "hcs/config.hpp"

#include "hcs/errors.hpp"
#include "hcs/io.hpp"

#include <json.hpp>

#include <fstream>
#include <set>

namespace hcs {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
}

std::string strategy_name(DesignStrategy s) {
    return s == DesignStrategy::GreedyForward ? "greedy" : "random";
}

DesignStrategy strategy_from_name(const std::string& name) {
    if (name == "greedy") return DesignStrategy::GreedyForward;
    if (name == "random") return DesignStrategy::RandomBaseline;
    throw ConfigError("config: unknown design strategy '" + name + "'");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(j, "top level", {"master_seed", "mask", "train", "design", "eval", "paths"});

    RunConfig cfg;
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    try {
        if (j.contains("mask")) {
            const json& m = j["mask"];
            check_keys(m, "mask", {"kind", "p", "q", "sylvester_k"});
            if (m.contains("kind")) cfg.mask.kind = mask_kind_from_name(m["kind"]);
            cfg.mask.p = m.value("p", cfg.mask.p);
            cfg.mask.q = m.value("q", cfg.mask.q);
            cfg.mask.sylvester_k = m.value("sylvester_k", cfg.mask.sylvester_k);
        }
        if (j.contains("train")) {
            const json& t = j["train"];
            check_keys(t, "train",
                       {"alphas", "beta", "gamma", "epochs", "code_iters", "dict_step", "layer_dims"});
            if (t.contains("alphas")) cfg.train.alphas = t["alphas"].get<std::vector<double>>();
            cfg.train.beta = t.value("beta", cfg.train.beta);
            cfg.train.gamma = t.value("gamma", cfg.train.gamma);
            cfg.train.epochs = t.value("epochs", cfg.train.epochs);
            cfg.train.code_iters = t.value("code_iters", cfg.train.code_iters);
            cfg.train.dict_step = t.value("dict_step", cfg.train.dict_step);
            if (t.contains("layer_dims")) cfg.train.layer_dims = t["layer_dims"].get<std::vector<int>>();
        }
        if (j.contains("design")) {
            const json& d = j["design"];
            check_keys(d, "design", {"L", "strategy", "restarts", "effective_target"});
            cfg.design.L = d.value("L", cfg.design.L);
            if (d.contains("strategy")) cfg.design.strategy = strategy_from_name(d["strategy"]);
            cfg.design.restarts = d.value("restarts", cfg.design.restarts);
            cfg.design.effective_target = d.value("effective_target", cfg.design.effective_target);
        }
        if (j.contains("eval")) {
            const json& e = j["eval"];
            check_keys(e, "eval",
                       {"letters", "m_grid", "snr_grid", "solvers", "trials_per_m", "theta",
                        "lambda_scale", "lasso_max_iters", "lasso_tol", "dl_max_iters", "dl_tol",
                        "dl_init_code_iters", "required_snr_target_m"});
            cfg.eval.letters = e.value("letters", cfg.eval.letters);
            if (e.contains("m_grid")) cfg.eval.m_grid = e["m_grid"].get<std::vector<int>>();
            if (e.contains("snr_grid")) cfg.eval.snr_grid = e["snr_grid"].get<std::vector<double>>();
            if (e.contains("solvers")) cfg.eval.solvers = e["solvers"].get<std::vector<std::string>>();
            cfg.eval.trials_per_m = e.value("trials_per_m", cfg.eval.trials_per_m);
            cfg.eval.theta = e.value("theta", cfg.eval.theta);
            cfg.eval.lambda_scale = e.value("lambda_scale", cfg.eval.lambda_scale);
            cfg.eval.lasso_max_iters = e.value("lasso_max_iters", cfg.eval.lasso_max_iters);
            cfg.eval.lasso_tol = e.value("lasso_tol", cfg.eval.lasso_tol);
            cfg.eval.dl_max_iters = e.value("dl_max_iters", cfg.eval.dl_max_iters);
            cfg.eval.dl_tol = e.value("dl_tol", cfg.eval.dl_tol);
            cfg.eval.dl_init_code_iters = e.value("dl_init_code_iters", cfg.eval.dl_init_code_iters);
            cfg.eval.required_snr_target_m =
                e.value("required_snr_target_m", cfg.eval.required_snr_target_m);
        }
        if (j.contains("paths")) {
            const json& p = j["paths"];
            check_keys(p, "paths", {"out_dir", "mask_file", "dict_file", "shifts_file", "journal"});
            cfg.paths.out_dir = p.value("out_dir", cfg.paths.out_dir);
            cfg.paths.mask_file = p.value("mask_file", cfg.paths.mask_file);
            cfg.paths.dict_file = p.value("dict_file", cfg.paths.dict_file);
            cfg.paths.shifts_file = p.value("shifts_file", cfg.paths.shifts_file);
            cfg.paths.journal = p.value("journal", cfg.paths.journal);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad value type: ") + e.what());
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }

    // Validation beyond shapes.
    for (char c : cfg.eval.letters) {
        if (c < 'A' || c > 'Z') throw ConfigError("config: eval.letters must contain only A..Z");
    }
    if (cfg.eval.letters.empty()) throw ConfigError("config: eval.letters is empty");
    if (cfg.eval.solvers.empty()) throw ConfigError("config: eval.solvers is empty");
    for (const std::string& s : cfg.eval.solvers) {
        if (s != "lasso" && s != "dlcsnet") throw ConfigError("config: unknown solver '" + s + "'");
    }
    if (cfg.eval.trials_per_m < 1) throw ConfigError("config: eval.trials_per_m must be >= 1");
    for (int m : cfg.eval.m_grid) {
        if (m < 1) throw ConfigError("config: eval.m_grid entries must be >= 1");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    j["master_seed"] = cfg.master_seed;
    j["mask"] = {{"kind", mask_kind_name(cfg.mask.kind)},
                 {"p", cfg.mask.p},
                 {"q", cfg.mask.q},
                 {"sylvester_k", cfg.mask.sylvester_k}};
    j["train"] = {{"alphas", cfg.train.alphas},       {"beta", cfg.train.beta},
                  {"gamma", cfg.train.gamma},         {"epochs", cfg.train.epochs},
                  {"code_iters", cfg.train.code_iters}, {"dict_step", cfg.train.dict_step},
                  {"layer_dims", cfg.train.layer_dims}};
    j["design"] = {{"L", cfg.design.L},
                   {"strategy", strategy_name(cfg.design.strategy)},
                   {"restarts", cfg.design.restarts},
                   {"effective_target", cfg.design.effective_target}};
    j["eval"] = {{"letters", cfg.eval.letters},
                 {"m_grid", cfg.eval.m_grid},
                 {"snr_grid", cfg.eval.snr_grid},
                 {"solvers", cfg.eval.solvers},
                 {"trials_per_m", cfg.eval.trials_per_m},
                 {"theta", cfg.eval.theta},
                 {"lambda_scale", cfg.eval.lambda_scale},
                 {"lasso_max_iters", cfg.eval.lasso_max_iters},
                 {"lasso_tol", cfg.eval.lasso_tol},
                 {"dl_max_iters", cfg.eval.dl_max_iters},
                 {"dl_tol", cfg.eval.dl_tol},
                 {"dl_init_code_iters", cfg.eval.dl_init_code_iters},
                 {"required_snr_target_m", cfg.eval.required_snr_target_m}};
    j["paths"] = {{"out_dir", cfg.paths.out_dir},
                  {"mask_file", cfg.paths.mask_file},
                  {"dict_file", cfg.paths.dict_file},
                  {"shifts_file", cfg.paths.shifts_file},
                  {"journal", cfg.paths.journal}};
    return j.dump(2);
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = config_to_json(cfg);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

EvalConfig make_eval_config(const RunConfig& cfg) {
    EvalConfig e;
    e.m_grid = cfg.eval.m_grid;
    e.trials_per_M = cfg.eval.trials_per_m;
    e.theta = cfg.eval.theta;
    e.lasso_max_iters = cfg.eval.lasso_max_iters;
    e.lasso_tol = cfg.eval.lasso_tol;
    e.dl_max_iters = cfg.eval.dl_max_iters;
    e.dl_tol = cfg.eval.dl_tol;
    e.dl_init_code_iters = cfg.eval.dl_init_code_iters;
    e.lambda_scale = cfg.eval.lambda_scale;
    e.master_seed = cfg.master_seed;
    return e;
}

}  // namespace hcs
