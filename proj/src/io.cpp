#include "hcs/io.hpp"

#include "hcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hcs {
namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

// Header lines look like: "hcsim-mask v1 kind=twin-prime-s n=15 p=3 q=5".
std::map<std::string, std::string> parse_header(const std::string& line, const std::string& magic) {
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    if (token != magic) throw IoError("bad header, expected " + magic + ": " + line);
    ss >> token;
    if (token != "v1") throw IoError("unsupported version in: " + line);
    std::map<std::string, std::string> kv;
    while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw IoError("bad header field: " + token);
        kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return kv;
}

std::string next_content_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') return line;
    }
    throw IoError("unexpected end of file");
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (!field.empty()) out.push_back(std::stoi(field));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (!field.empty()) out.push_back(std::stod(field));
    }
    return out;
}

template <typename T>
std::string join(const std::vector<T>& values, const char* sep = ",") {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        if constexpr (std::is_same_v<T, double>) {
            out += format_double(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

char entry_char(MaskKind kind, double v) {
    if (kind == MaskKind::SylvesterHadamard) return v > 0 ? '+' : '-';
    return v != 0.0 ? '1' : '0';
}

std::int8_t entry_value(MaskKind kind, char c, const std::string& where) {
    if (kind == MaskKind::SylvesterHadamard) {
        if (c == '+') return 1;
        if (c == '-') return -1;
    } else {
        if (c == '1') return 1;
        if (c == '0') return 0;
    }
    throw IoError("bad matrix character '" + std::string(1, c) + "' in " + where);
}

}  // namespace

std::string format_double(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    if (v == -std::numeric_limits<double>::infinity()) return "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string mask_kind_name(MaskKind kind) {
    return kind == MaskKind::SylvesterHadamard ? "sylvester-hadamard" : "twin-prime-s";
}

MaskKind mask_kind_from_name(const std::string& name) {
    if (name == "sylvester-hadamard") return MaskKind::SylvesterHadamard;
    if (name == "twin-prime-s") return MaskKind::TwinPrimeS;
    throw IoError("unknown mask kind: " + name);
}

void save_mask(const MaskMatrix& mask, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "hcsim-mask v1 kind=" << mask_kind_name(mask.kind) << " n=" << mask.order
        << " p=" << mask.p << " q=" << mask.q
        << " convention=" << (mask.kind == MaskKind::SylvesterHadamard ? "pm1" : "binary") << "\n";
    for (int r = 0; r < mask.order; ++r) {
        std::string row(mask.order, '0');
        for (int c = 0; c < mask.order; ++c) row[c] = entry_char(mask.kind, mask.entries(r, c));
        out << row << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

MaskMatrix load_mask(const std::string& path) {
    std::ifstream in = open_in(path);
    const auto kv = parse_header(next_content_line(in), "hcsim-mask");
    MaskMatrix mask;
    mask.kind = mask_kind_from_name(kv.at("kind"));
    mask.order = std::stoi(kv.at("n"));
    mask.p = std::stoi(kv.at("p"));
    mask.q = std::stoi(kv.at("q"));
    mask.entries.resize(mask.order, mask.order);
    for (int r = 0; r < mask.order; ++r) {
        const std::string row = next_content_line(in);
        if (static_cast<int>(row.size()) != mask.order) throw IoError("bad row length in " + path);
        for (int c = 0; c < mask.order; ++c) mask.entries(r, c) = entry_value(mask.kind, row[c], path);
    }
    return mask;
}

void save_sensing(const SensingMatrix& s, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "hcsim-sensing v1 kind=" << mask_kind_name(s.kind) << " n=" << s.cols << " p=" << s.p
        << " q=" << s.q << " convention=" << (s.kind == MaskKind::SylvesterHadamard ? "pm1" : "binary")
        << " L=" << s.rows << "\n";
    out << "shifts=" << join(s.shifts) << "\n";
    for (int r = 0; r < s.rows; ++r) {
        std::string row(s.cols, '0');
        for (int c = 0; c < s.cols; ++c) row[c] = entry_char(s.kind, s.m(r, c));
        out << row << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

SensingMatrix load_sensing(const std::string& path) {
    std::ifstream in = open_in(path);
    const auto kv = parse_header(next_content_line(in), "hcsim-sensing");
    SensingMatrix s;
    s.kind = mask_kind_from_name(kv.at("kind"));
    s.cols = std::stoi(kv.at("n"));
    s.p = std::stoi(kv.at("p"));
    s.q = std::stoi(kv.at("q"));
    s.rows = std::stoi(kv.at("L"));
    const std::string shifts_line = next_content_line(in);
    if (shifts_line.rfind("shifts=", 0) != 0) throw IoError("missing shifts line in " + path);
    s.shifts = parse_int_list(shifts_line.substr(7));
    if (static_cast<int>(s.shifts.size()) != s.rows) throw IoError("shift count != L in " + path);
    s.m.resize(s.rows, s.cols);
    for (int r = 0; r < s.rows; ++r) {
        const std::string row = next_content_line(in);
        if (static_cast<int>(row.size()) != s.cols) throw IoError("bad row length in " + path);
        for (int c = 0; c < s.cols; ++c) s.m(r, c) = entry_value(s.kind, row[c], path);
    }
    return s;
}

void save_shifts(const SensingMatrix& s, const std::string& path, const std::string& comment) {
    std::ofstream out = open_out(path);
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "hcsim-shifts v1 kind=" << mask_kind_name(s.kind) << " n=" << s.cols << " L=" << s.rows
        << "\n";
    out << join(s.shifts) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

ShiftsFile load_shifts(const std::string& path) {
    std::ifstream in = open_in(path);
    const auto kv = parse_header(next_content_line(in), "hcsim-shifts");
    ShiftsFile f;
    f.kind = kv.at("kind");
    f.n = std::stoi(kv.at("n"));
    f.shifts = parse_int_list(next_content_line(in));
    if (static_cast<int>(f.shifts.size()) != std::stoi(kv.at("L"))) {
        throw IoError("shift count != L in " + path);
    }
    return f;
}

void save_measurement_csv(const MeasurementVector& t, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "# hcsim-measurement v1 L=" << t.values.size()
        << " snr_db=" << (t.snr_db ? format_double(*t.snr_db) : "none")
        << " seed=" << (t.seed ? std::to_string(*t.seed) : "none") << "\n";
    for (long i = 0; i < t.values.size(); ++i) out << format_double(t.values[i]) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

MeasurementVector load_measurement_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# hcsim-measurement v1", 0) != 0) {
        throw IoError("missing measurement header in " + path);
    }
    const auto kv = parse_header(line.substr(2), "hcsim-measurement");
    MeasurementVector t;
    const long l = std::stol(kv.at("L"));
    if (kv.at("snr_db") != "none") {
        t.snr_db = kv.at("snr_db") == "inf" ? std::numeric_limits<double>::infinity()
                                            : std::stod(kv.at("snr_db"));
    }
    if (kv.at("seed") != "none") t.seed = std::stoull(kv.at("seed"));
    t.values.resize(l);
    for (long i = 0; i < l; ++i) t.values[i] = std::stod(next_content_line(in));
    return t;
}

void save_stack(const DictionaryStack& stack, const std::string& path, const std::string& comment) {
    std::ofstream out = open_out(path);
    if (!comment.empty()) out << "# " << comment << "\n";
    std::vector<int> dims = stack.layer_dims;
    out << "hcsim-dict v1 dims=" << join(dims) << " p=" << stack.p << " q=" << stack.q
        << " seed=" << stack.seed << " epochs=" << stack.epochs_trained
        << " alphas=" << join(stack.alphas) << " beta=" << format_double(stack.beta)
        << " gamma=" << format_double(stack.gamma) << "\n";
    for (const Eigen::MatrixXd& d : stack.layers) {
        for (long r = 0; r < d.rows(); ++r) {
            std::string line;
            for (long c = 0; c < d.cols(); ++c) {
                if (c) line += ' ';
                line += format_double(d(r, c));
            }
            out << line << "\n";
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

DictionaryStack load_stack(const std::string& path) {
    std::ifstream in = open_in(path);
    const auto kv = parse_header(next_content_line(in), "hcsim-dict");
    DictionaryStack stack;
    stack.layer_dims = parse_int_list(kv.at("dims"));
    stack.p = std::stoi(kv.at("p"));
    stack.q = std::stoi(kv.at("q"));
    stack.seed = std::stoull(kv.at("seed"));
    stack.epochs_trained = std::stoi(kv.at("epochs"));
    stack.alphas = parse_double_list(kv.at("alphas"));
    stack.beta = std::stod(kv.at("beta"));
    stack.gamma = std::stod(kv.at("gamma"));
    if (stack.layer_dims.size() < 2) throw IoError("dictionary file has no layers: " + path);
    for (size_t i = 0; i + 1 < stack.layer_dims.size(); ++i) {
        Eigen::MatrixXd d(stack.layer_dims[i], stack.layer_dims[i + 1]);
        for (long r = 0; r < d.rows(); ++r) {
            std::istringstream ss(next_content_line(in));
            for (long c = 0; c < d.cols(); ++c) {
                if (!(ss >> d(r, c))) throw IoError("truncated matrix row in " + path);
            }
        }
        stack.layers.push_back(std::move(d));
    }
    return stack;
}

void save_pgm(const Image& img, const std::string& path, const std::string& comment) {
    std::ofstream out = open_out(path);
    out << "P2\n";
    if (!comment.empty()) out << "# " << comment << "\n";
    out << img.q << " " << img.p << "\n255\n";
    for (int r = 0; r < img.p; ++r) {
        std::string line;
        for (int c = 0; c < img.q; ++c) {
            if (c) line += ' ';
            const double v = std::clamp(img(r, c), 0.0, 1.0);
            line += std::to_string(static_cast<int>(std::lround(v * 255.0)));
        }
        out << line << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

void save_records_csv(const std::vector<EvalRecord>& records, const std::string& path,
                      const std::string& comment) {
    std::ofstream out = open_out(path);
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "letter,M,L,snr_db,seed,solver,ber,iters\n";
    for (const EvalRecord& r : records) {
        out << r.letter << ',' << format_double(r.M) << ',' << r.L << ','
            << format_double(r.snr_db) << ',' << r.seed << ',' << solver_name(r.solver) << ','
            << format_double(r.ber) << ',' << r.iters << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<EvalRecord> load_records_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<EvalRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("letter,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) throw IoError("bad record row in " + path + ": " + line);
        EvalRecord r;
        r.letter = fields[0][0];
        r.M = std::stod(fields[1]);
        r.L = std::stoi(fields[2]);
        r.snr_db = fields[3] == "inf" ? std::numeric_limits<double>::infinity() : std::stod(fields[3]);
        r.seed = std::stoull(fields[4]);
        r.solver = solver_from_name(fields[5]);
        r.ber = std::stod(fields[6]);
        r.iters = std::stoi(fields[7]);
        records.push_back(r);
    }
    return records;
}

void save_summary_csv(const std::vector<SweepSummary>& summaries, const std::string& path,
                      const std::string& comment) {
    std::ofstream out = open_out(path);
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "solver,snr_db,letter,max_M\n";
    for (const SweepSummary& s : summaries) {
        for (const auto& [letter, m] : s.per_letter_max_M) {
            out << solver_name(s.solver) << ',' << format_double(s.snr_db) << ',' << letter << ','
                << format_double(m) << "\n";
        }
        out << solver_name(s.solver) << ',' << format_double(s.snr_db) << ",mean,"
            << format_double(s.mean_M) << "\n";
        out << solver_name(s.solver) << ',' << format_double(s.snr_db) << ",median,"
            << format_double(s.median_M) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

void save_loss_csv(const std::vector<LossBreakdown>& trace, const std::string& path,
                   const std::string& comment) {
    std::ofstream out = open_out(path);
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "epoch,l1_codes,image_mse,meas_mse,total\n";
    for (size_t e = 0; e < trace.size(); ++e) {
        out << e << ',' << format_double(trace[e].l1_codes) << ',' << format_double(trace[e].image_mse)
            << ',' << format_double(trace[e].meas_mse) << ',' << format_double(trace[e].total) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace hcs
