#include "dismap/qasm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

namespace dismap {

namespace {

enum class TokKind { Identifier, Number, String, Symbol, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    double value = 0.0;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws_and_comments();
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= text_.size()) {
            current_.kind = TokKind::End;
            current_.text.clear();
            return;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                bump();
            }
            current_.kind = TokKind::Identifier;
            current_.text = text_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                    text_[pos_] == 'e' || text_[pos_] == 'E' ||
                    ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
                     (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
                bump();
            }
            current_.kind = TokKind::Number;
            current_.text = text_.substr(start, pos_ - start);
            current_.value = std::strtod(current_.text.c_str(), nullptr);
            return;
        }
        if (c == '"') {
            bump();
            std::size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '"') bump();
            if (pos_ >= text_.size()) {
                throw ParseError("unterminated string literal", current_.line, current_.col);
            }
            current_.kind = TokKind::String;
            current_.text = text_.substr(start, pos_ - start);
            bump();  // closing quote
            return;
        }
        // "->" is the only multi-char symbol in the subset.
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            current_.kind = TokKind::Symbol;
            current_.text = "->";
            bump();
            bump();
            return;
        }
        current_.kind = TokKind::Symbol;
        current_.text = std::string(1, c);
        bump();
    }

    void skip_ws_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_;
};

class Parser {
public:
    Parser(const std::string& text, std::string name) : lex_(text) {
        circuit_.name = std::move(name);
    }

    Circuit run() {
        parse_header();
        while (lex_.peek().kind != TokKind::End) {
            parse_statement();
        }
        if (qreg_size_ < 0) {
            throw ParseError("no quantum register declared", lex_.peek().line, lex_.peek().col);
        }
        circuit_.n_qubits = qreg_size_;
        validate_circuit(circuit_);
        return circuit_;
    }

private:
    [[noreturn]] void fail(const std::string& msg, const Token& at) {
        throw ParseError(msg, at.line, at.col);
    }

    Token expect_symbol(const std::string& sym) {
        Token t = lex_.next();
        if (t.kind != TokKind::Symbol || t.text != sym) {
            fail("expected '" + sym + "'", t);
        }
        return t;
    }

    Token expect_identifier() {
        Token t = lex_.next();
        if (t.kind != TokKind::Identifier) fail("expected identifier", t);
        return t;
    }

    int expect_uint() {
        Token t = lex_.next();
        if (t.kind != TokKind::Number || t.text.find_first_not_of("0123456789") != std::string::npos) {
            fail("expected non-negative integer", t);
        }
        return static_cast<int>(t.value);
    }

    void parse_header() {
        Token t = lex_.next();
        if (t.kind != TokKind::Identifier || t.text != "OPENQASM") {
            fail("expected 'OPENQASM 2.0;' header", t);
        }
        Token ver = lex_.next();
        if (ver.kind != TokKind::Number || ver.text != "2.0") {
            fail("only OPENQASM 2.0 is supported", ver);
        }
        expect_symbol(";");
    }

    void parse_statement() {
        Token t = lex_.next();
        if (t.kind != TokKind::Identifier) fail("expected statement", t);

        if (t.text == "include") {
            Token file = lex_.next();
            if (file.kind != TokKind::String) fail("expected include file string", file);
            if (file.text != "qelib1.inc") {
                fail("unsupported include \"" + file.text + "\"", file);
            }
            expect_symbol(";");
            return;
        }
        if (t.text == "qreg") {
            if (qreg_size_ >= 0) fail("multiple quantum registers are not supported", t);
            Token name = expect_identifier();
            expect_symbol("[");
            int size = expect_uint();
            expect_symbol("]");
            expect_symbol(";");
            if (size <= 0) fail("quantum register must have positive size", name);
            qreg_name_ = name.text;
            qreg_size_ = size;
            return;
        }
        if (t.text == "creg") {
            if (!creg_name_.empty()) fail("multiple classical registers are not supported", t);
            Token name = expect_identifier();
            expect_symbol("[");
            creg_size_ = expect_uint();
            expect_symbol("]");
            expect_symbol(";");
            creg_name_ = name.text;
            return;
        }
        if (t.text == "measure") {
            parse_measure(t);
            return;
        }
        if (t.text == "barrier") {
            parse_barrier(t);
            return;
        }

        GateKind kind;
        if (!gate_from_name(t.text, kind)) {
            fail("unsupported gate name '" + t.text + "'", t);
        }
        if (qreg_size_ < 0) fail("gate before qreg declaration", t);

        std::vector<double> params;
        if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == "(") {
            lex_.next();
            params.push_back(parse_expr());
            while (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == ",") {
                lex_.next();
                params.push_back(parse_expr());
            }
            expect_symbol(")");
        }
        if (static_cast<int>(params.size()) != gate_param_count(kind)) {
            fail("gate '" + t.text + "' expects " + std::to_string(gate_param_count(kind)) +
                     " parameter(s)",
                 t);
        }

        std::vector<std::optional<int>> args;  // nullopt = whole register
        args.push_back(parse_qubit_arg(t));
        while (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == ",") {
            lex_.next();
            args.push_back(parse_qubit_arg(t));
        }
        expect_symbol(";");

        const int arity = gate_arity(kind);
        if (arity == 1 && args.size() == 1 && !args[0]) {
            // Broadcast a single-qubit gate over the register.
            for (int q = 0; q < qreg_size_; ++q) {
                circuit_.add(kind, {q}, params);
            }
            return;
        }
        if (static_cast<int>(args.size()) != arity) {
            fail("gate '" + t.text + "' expects " + std::to_string(arity) + " operand(s)", t);
        }
        std::vector<int> qubits;
        for (auto& a : args) {
            if (!a) fail("whole-register operand not allowed for multi-qubit gate", t);
            qubits.push_back(*a);
        }
        circuit_.add(kind, std::move(qubits), params);
    }

    void parse_measure(const Token& at) {
        auto q = parse_qubit_arg(at);
        expect_symbol("->");
        Token cname = expect_identifier();
        if (cname.text != creg_name_) fail("unknown classical register '" + cname.text + "'", cname);
        std::optional<int> c;
        if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == "[") {
            lex_.next();
            int idx = expect_uint();
            expect_symbol("]");
            if (idx >= creg_size_) fail("classical index out of range", cname);
            c = idx;
        }
        expect_symbol(";");
        if (q.has_value() != c.has_value()) {
            fail("measure operands must both be indexed or both be registers", at);
        }
        if (q) {
            circuit_.add(GateKind::Measure, {*q});
        } else {
            for (int i = 0; i < qreg_size_; ++i) circuit_.add(GateKind::Measure, {i});
        }
    }

    void parse_barrier(const Token& at) {
        std::vector<int> qubits;
        auto first = parse_qubit_arg(at);
        if (!first) {
            for (int i = 0; i < qreg_size_; ++i) qubits.push_back(i);
        } else {
            qubits.push_back(*first);
            while (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == ",") {
                lex_.next();
                auto q = parse_qubit_arg(at);
                if (!q) fail("cannot mix register and indexed barrier operands", at);
                qubits.push_back(*q);
            }
        }
        expect_symbol(";");
        circuit_.add(GateKind::Barrier, std::move(qubits));
    }

    std::optional<int> parse_qubit_arg(const Token& context) {
        Token name = expect_identifier();
        if (qreg_size_ < 0) fail("qubit operand before qreg declaration", name);
        if (name.text != qreg_name_) fail("unknown register '" + name.text + "'", name);
        if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == "[") {
            lex_.next();
            Token idx_tok = lex_.peek();
            int idx = expect_uint();
            expect_symbol("]");
            if (idx >= qreg_size_) {
                fail("qubit index " + std::to_string(idx) + " out of range for register of size " +
                         std::to_string(qreg_size_),
                     idx_tok);
            }
            return idx;
        }
        (void)context;
        return std::nullopt;
    }

    // Angle expressions: numbers, pi, + - * /, unary minus, parentheses.
    double parse_expr() { return parse_additive(); }

    double parse_additive() {
        double v = parse_multiplicative();
        while (lex_.peek().kind == TokKind::Symbol &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            std::string op = lex_.next().text;
            double rhs = parse_multiplicative();
            v = (op == "+") ? v + rhs : v - rhs;
        }
        return v;
    }

    double parse_multiplicative() {
        double v = parse_unary();
        while (lex_.peek().kind == TokKind::Symbol &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            Token op = lex_.next();
            double rhs = parse_unary();
            if (op.text == "/") {
                if (rhs == 0.0) fail("division by zero in parameter expression", op);
                v /= rhs;
            } else {
                v *= rhs;
            }
        }
        return v;
    }

    double parse_unary() {
        const Token& t = lex_.peek();
        if (t.kind == TokKind::Symbol && t.text == "-") {
            lex_.next();
            return -parse_unary();
        }
        if (t.kind == TokKind::Symbol && t.text == "+") {
            lex_.next();
            return parse_unary();
        }
        if (t.kind == TokKind::Symbol && t.text == "(") {
            lex_.next();
            double v = parse_expr();
            expect_symbol(")");
            return v;
        }
        if (t.kind == TokKind::Number) {
            return lex_.next().value;
        }
        if (t.kind == TokKind::Identifier && t.text == "pi") {
            lex_.next();
            return std::numbers::pi;
        }
        fail("expected parameter expression", t);
    }

    Lexer lex_;
    Circuit circuit_;
    std::string qreg_name_;
    int qreg_size_ = -1;
    std::string creg_name_;
    int creg_size_ = 0;
};

std::string format_angle(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Circuit parse_qasm(const std::string& text, const std::string& name) {
    Parser parser(text, name);
    return parser.run();
}

Circuit parse_qasm_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open QASM file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_qasm(buf.str(), path.stem().string());
}

std::string emit_qasm(const Circuit& circuit) {
    validate_circuit(circuit);
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    out << "qreg q[" << circuit.n_qubits << "];\n";
    if (!circuit.measured_qubits().empty()) {
        out << "creg c[" << circuit.n_qubits << "];\n";
    }
    for (const auto& g : circuit.gates) {
        if (g.kind == GateKind::Measure) {
            out << "measure q[" << g.qubits[0] << "] -> c[" << g.qubits[0] << "];\n";
            continue;
        }
        out << gate_name(g.kind);
        if (!g.params.empty()) {
            out << "(";
            for (std::size_t i = 0; i < g.params.size(); ++i) {
                if (i) out << ",";
                out << format_angle(g.params[i]);
            }
            out << ")";
        }
        out << " ";
        for (std::size_t i = 0; i < g.qubits.size(); ++i) {
            if (i) out << ",";
            out << "q[" << g.qubits[i] << "]";
        }
        out << ";\n";
    }
    return out.str();
}

}  // namespace dismap
