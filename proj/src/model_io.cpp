#include "proxyopt/model_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "proxyopt/csv.hpp"

namespace proxyopt {

namespace {

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v(i));
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::vector<std::string> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            std::istringstream ss(line);
            std::vector<std::string> tokens;
            std::string tok;
            while (ss >> tok) tokens.push_back(tok);
            return tokens;
        }
        fail("unexpected end of file");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::Parse, "model line " + std::to_string(line_no_) + ": " + msg, line_no_);
    }

    double number(const std::string& tok) const {
        double v;
        if (!parse_double(tok, v) || !std::isfinite(v)) fail("bad number '" + tok + "'");
        return v;
    }

    long integer(const std::string& tok) const {
        try {
            std::size_t used = 0;
            const long v = std::stol(tok, &used);
            if (used != tok.size()) fail("bad integer '" + tok + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("bad integer '" + tok + "'");
        }
    }

    std::vector<std::string> expect(const std::string& key, std::size_t min_tokens) {
        auto tokens = next();
        if (tokens.empty() || tokens[0] != key) fail("expected '" + key + "'");
        if (tokens.size() < min_tokens) fail("truncated '" + key + "' record");
        return tokens;
    }

    Eigen::VectorXd counted_vector(const std::string& key, Eigen::Index expected) {
        const auto tokens = expect(key, 2);
        const long count = integer(tokens[1]);
        if (count != expected || tokens.size() != static_cast<std::size_t>(count) + 2) {
            fail("'" + key + "' must carry " + std::to_string(expected) + " values");
        }
        Eigen::VectorXd v(count);
        for (long i = 0; i < count; ++i) v(i) = number(tokens[static_cast<std::size_t>(i) + 2]);
        return v;
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

}  // namespace

void save_model(std::ostream& out, const MlpModel& model) {
    out << kModelMagic << " v" << kModelFormatVersion << '\n';
    out << "layer_sizes " << model.layer_sizes.size();
    for (int s : model.layer_sizes) out << ' ' << s;
    out << '\n';
    out << "activation relu\n";
    out << "input_center " << model.norm.input_center.size();
    write_vector(out, model.norm.input_center);
    out << '\n';
    out << "input_halfrange " << model.norm.input_halfrange.size();
    write_vector(out, model.norm.input_halfrange);
    out << '\n';
    out << "target_mean " << format_double(model.norm.target_mean) << '\n';
    out << "target_std " << format_double(model.norm.target_std) << '\n';
    for (std::size_t l = 0; l < model.num_layers(); ++l) {
        const auto& w = model.weights[l];
        out << "weight " << l << ' ' << w.rows() << ' ' << w.cols() << '\n';
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) out << (c ? " " : "") << format_double(w(r, c));
            out << '\n';
        }
        out << "bias " << l << ' ' << model.biases[l].size();
        write_vector(out, model.biases[l]);
        out << '\n';
    }
    out << "end\n";
}

void save_model(const std::string& path, const MlpModel& model) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    save_model(out, model);
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

MlpModel load_model(std::istream& in) {
    LineReader reader(in);

    const auto header = reader.next();
    if (header.size() != 2 || header[0] != kModelMagic) reader.fail("not a proxyopt model file");
    if (header[1] != "v" + std::to_string(kModelFormatVersion)) reader.fail("unsupported format version " + header[1]);

    MlpModel model;
    const auto sizes = reader.expect("layer_sizes", 2);
    const long count = reader.integer(sizes[1]);
    if (count < 3 || sizes.size() != static_cast<std::size_t>(count) + 2) reader.fail("malformed layer_sizes");
    for (long i = 0; i < count; ++i) model.layer_sizes.push_back(static_cast<int>(reader.integer(sizes[static_cast<std::size_t>(i) + 2])));
    try {
        validate_architecture<double>(model.layer_sizes);
    } catch (const Error& e) {
        reader.fail(e.what());
    }

    const auto act = reader.expect("activation", 2);
    if (act[1] != "relu") reader.fail("unsupported activation '" + act[1] + "'");

    const Eigen::Index d = model.layer_sizes.front();
    model.norm.input_center = reader.counted_vector("input_center", d);
    model.norm.input_halfrange = reader.counted_vector("input_halfrange", d);
    model.norm.target_mean = reader.number(reader.expect("target_mean", 2)[1]);
    model.norm.target_std = reader.number(reader.expect("target_std", 2)[1]);
    if (!(model.norm.input_halfrange.array() > 0.0).all() || !(model.norm.target_std > 0.0)) {
        reader.fail("normalization scales must be positive");
    }

    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const Eigen::Index rows = model.layer_sizes[l + 1];
        const Eigen::Index cols = model.layer_sizes[l];
        const auto wh = reader.expect("weight", 4);
        if (reader.integer(wh[1]) != static_cast<long>(l) || reader.integer(wh[2]) != rows || reader.integer(wh[3]) != cols) {
            reader.fail("weight header does not match layer_sizes");
        }
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const auto row = reader.next();
            if (static_cast<Eigen::Index>(row.size()) != cols) reader.fail("weight row has wrong length");
            for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = reader.number(row[static_cast<std::size_t>(c)]);
        }
        const auto bh = reader.expect("bias", 3);
        if (reader.integer(bh[1]) != static_cast<long>(l) || reader.integer(bh[2]) != rows ||
            bh.size() != static_cast<std::size_t>(rows) + 3) {
            reader.fail("bias record does not match layer_sizes");
        }
        Eigen::VectorXd b(rows);
        for (Eigen::Index r = 0; r < rows; ++r) b(r) = reader.number(bh[static_cast<std::size_t>(r) + 3]);
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    const auto end = reader.next();
    if (end.size() != 1 || end[0] != "end") reader.fail("expected 'end'");
    return model;
}

MlpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    return load_model(in);
}

}  // namespace proxyopt
