#include "locboost/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "locboost/textio.hpp"

namespace locboost {

namespace fs = std::filesystem;

namespace {
constexpr const char* kModelMagic = "locboost-model";
constexpr int kModelVersion = 1;
} // namespace

void save_model(std::span<const HosHypothesis> members, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model: " + path.string());
    out << kModelMagic << " " << kModelVersion << "\n";
    out << "members " << members.size() << "\n";
    for (const HosHypothesis& m : members) {
        const FeatureDescriptor& f = m.feature;
        out << feature_kind_name(f.kind) << " " << f.orientation << " " << f.block_w << " "
            << f.block_h << " " << f.offset_x << " " << f.offset_y << " " << f.polarity << " "
            << f.scale << " " << f.seed << " " << f.draw_index << " "
            << format_double(m.theta) << " " << format_double(m.alpha) << " "
            << format_double(m.shift) << " " << kernel_shape_name(m.kernel.shape()) << " "
            << format_double(m.kernel.radius()) << " " << evidence_mode_name(m.mode) << "\n";
    }
    if (!out) throw std::runtime_error("failed writing model: " + path.string());
}

std::vector<HosHypothesis> load_model(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model: " + path.string());
    const std::string p = path.string();
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) {
            throw ParseError(p, line_no + 1, std::string("truncated model file, expected ") + what);
        }
        ++line_no;
    };

    next_line("header");
    {
        std::istringstream ss(line);
        std::string magic;
        long long version = 0;
        if (!(ss >> magic >> version) || magic != kModelMagic) {
            throw ParseError(p, line_no, "not a model file");
        }
        if (version != kModelVersion) {
            throw ParseError(p, line_no, "unsupported model version");
        }
    }
    next_line("member count");
    std::size_t count = 0;
    {
        std::istringstream ss(line);
        std::string tag, value;
        if (!(ss >> tag >> value) || tag != "members") {
            throw ParseError(p, line_no, "expected 'members <count>'");
        }
        count = static_cast<std::size_t>(parse_uint(value, p, line_no));
    }

    std::vector<HosHypothesis> members;
    members.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        next_line("ensemble member record");
        std::istringstream ss(line);
        std::vector<std::string> tok;
        std::string t;
        while (ss >> t) tok.push_back(t);
        if (tok.size() != 16) {
            throw ParseError(p, line_no, "expected 16 fields in member record");
        }
        HosHypothesis m;
        try {
            m.feature.kind = feature_kind_from_name(tok[0]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(p, line_no, e.what());
        }
        m.feature.orientation = static_cast<int>(parse_int(tok[1], p, line_no));
        m.feature.block_w = static_cast<int>(parse_int(tok[2], p, line_no));
        m.feature.block_h = static_cast<int>(parse_int(tok[3], p, line_no));
        m.feature.offset_x = static_cast<int>(parse_int(tok[4], p, line_no));
        m.feature.offset_y = static_cast<int>(parse_int(tok[5], p, line_no));
        m.feature.polarity = static_cast<int>(parse_int(tok[6], p, line_no));
        m.feature.scale = static_cast<int>(parse_int(tok[7], p, line_no));
        m.feature.seed = parse_uint(tok[8], p, line_no);
        m.feature.draw_index = parse_uint(tok[9], p, line_no);
        m.theta = parse_double(tok[10], p, line_no);
        m.alpha = parse_double(tok[11], p, line_no);
        m.shift = parse_double(tok[12], p, line_no);
        try {
            m.kernel = CorrelationKernel(kernel_shape_from_name(tok[13]),
                                         parse_double(tok[14], p, line_no));
            m.mode = evidence_mode_from_name(tok[15]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(p, line_no, e.what());
        }
        if (m.alpha < 0.0 || m.shift < 0.0) {
            throw ParseError(p, line_no, "alpha and shift must be non-negative");
        }
        members.push_back(m);
    }
    return members;
}

void write_detections(std::span<const ImageDetections> detections, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write detections: " + path.string());
    struct Row {
        const std::string* id;
        ScoredLocation d;
    };
    std::vector<Row> rows;
    for (const ImageDetections& image : detections) {
        for (const ScoredLocation& d : image.detections) rows.push_back({&image.image_id, d});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.d.confidence != b.d.confidence) return a.d.confidence > b.d.confidence;
        if (*a.id != *b.id) return *a.id < *b.id;
        if (a.d.y != b.d.y) return a.d.y < b.d.y;
        return a.d.x < b.d.x;
    });
    for (const Row& row : rows) {
        out << *row.id << " " << row.d.x << " " << row.d.y << " "
            << format_double(row.d.confidence) << "\n";
    }
    if (!out) throw std::runtime_error("failed writing detections: " + path.string());
}

std::vector<ImageDetections> read_detections(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open detections: " + path.string());
    const std::string p = path.string();
    std::map<std::string, std::vector<ScoredLocation>> by_image;
    std::vector<std::string> order;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string id, xs, ys, cs, extra;
        if (!(ss >> id)) continue;
        if (id[0] == '#') continue;
        if (!(ss >> xs >> ys >> cs) || (ss >> extra)) {
            throw ParseError(p, line_no, "expected '<image_id> <x> <y> <confidence>'");
        }
        ScoredLocation d;
        d.x = static_cast<int>(parse_int(xs, p, line_no));
        d.y = static_cast<int>(parse_int(ys, p, line_no));
        d.confidence = parse_double(cs, p, line_no);
        auto [it, inserted] = by_image.try_emplace(id);
        if (inserted) order.push_back(id);
        it->second.push_back(d);
    }
    std::vector<ImageDetections> out;
    out.reserve(order.size());
    for (const std::string& id : order) {
        out.push_back({id, std::move(by_image[id])});
    }
    return out;
}

void write_roc(const RocCurve& curve, double delta, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write roc file: " + path.string());
    out << "# delta " << format_double(delta) << " truncation "
        << format_double(curve.truncation) << "\n";
    for (const RocPoint& point : curve.points) {
        out << format_double(point.threshold) << " " << format_double(point.false_positive_rate)
            << " " << format_double(point.detection_rate) << "\n";
    }
    if (!out) throw std::runtime_error("failed writing roc file: " + path.string());
}

} // namespace locboost
