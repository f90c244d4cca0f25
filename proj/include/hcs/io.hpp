#pragma once

#include "hcs/channel.hpp"
#include "hcs/dictionary.hpp"
#include "hcs/evaluation.hpp"
#include "hcs/image.hpp"
#include "hcs/sensing.hpp"

#include <string>
#include <vector>

namespace hcs {

// Canonical decimal text for doubles; round-trips IEEE values exactly.
std::string format_double(double v);

std::string mask_kind_name(MaskKind kind);
MaskKind mask_kind_from_name(const std::string& name);

// Text formats, bit-exact round-trip. Masks and sensing matrices store a
// header line (kind, n, p, q, convention) followed by one character per
// entry: '0'/'1' for binary masks, '+'/'-' for the +-1 convention.
void save_mask(const MaskMatrix& mask, const std::string& path);
MaskMatrix load_mask(const std::string& path);

void save_sensing(const SensingMatrix& s, const std::string& path);
SensingMatrix load_sensing(const std::string& path);

// The measurement-sequence artifact: header naming mask kind, n, L, then the
// shift list as comma-separated integers.
struct ShiftsFile {
    std::string kind;
    int n = 0;
    std::vector<int> shifts;
};
void save_shifts(const SensingMatrix& s, const std::string& path, const std::string& comment = "");
ShiftsFile load_shifts(const std::string& path);

// One value per line with an L/snr_db/seed header.
void save_measurement_csv(const MeasurementVector& t, const std::string& path);
MeasurementVector load_measurement_csv(const std::string& path);

// Versioned dictionary file: header (dims, geometry, weights, seed, epochs),
// then the layer matrices row-major in decimal text.
void save_stack(const DictionaryStack& stack, const std::string& path, const std::string& comment = "");
DictionaryStack load_stack(const std::string& path);

// P2 ASCII PGM, pixels clamped to [0,1] and scaled to 0..255.
void save_pgm(const Image& img, const std::string& path, const std::string& comment = "");

void save_records_csv(const std::vector<EvalRecord>& records, const std::string& path,
                      const std::string& comment = "");
std::vector<EvalRecord> load_records_csv(const std::string& path);

void save_summary_csv(const std::vector<SweepSummary>& summaries, const std::string& path,
                      const std::string& comment = "");

void save_loss_csv(const std::vector<LossBreakdown>& trace, const std::string& path,
                   const std::string& comment = "");

}  // namespace hcs
