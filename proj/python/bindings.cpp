#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idring/calculus.hpp"
#include "idring/lexer.hpp"
#include "idring/rings.hpp"
#include "idring/syntax.hpp"
#include "idring/tenred.hpp"

namespace py = pybind11;
using namespace idr;

namespace {

struct Session {
    RingPtr ring;
    OpContextPtr ctx;
    ElemDefs defs;

    Session(const std::string& tag, const std::map<std::string, std::string>& d, const std::vector<std::string>& phis,
            const std::vector<std::string>& mult)
        : ring(make_ring(tag)), ctx(OpContext::create(ring, phis, mult)) {
        for (const auto& [k, v] : d) defs[k] = elem(v);
    }

    RingElem elem(const std::string& text) const {
        Lexer lx(text);
        RingElem r = parse_sum(*ring, lx, &defs);
        if (!lx.at_end()) throw ParseError("unexpected '" + lx.peek().text + "'", lx.position());
        return r;
    }
};

using Defs = std::map<std::string, std::string>;
using Names = std::vector<std::string>;

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Integro-differential operator normal forms, proofs and confluence checks";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<RingError>(m, "RingError", PyExc_ArithmeticError);
    py::register_exception<OpError>(m, "OpError", PyExc_ArithmeticError);

    m.def(
        "normalize",
        [](const std::string& expr, const std::string& ring, const Defs& defs, const Names& phis, const Names& mult) {
            Session s(ring, defs, phis, mult);
            return s.ctx->normalize(s.ctx->parse(expr, &s.defs)).str();
        },
        py::arg("expr"), py::arg("ring") = "qx", py::arg("defs") = Defs{}, py::arg("phis") = Names{},
        py::arg("mult") = Names{});

    m.def(
        "prove",
        [](const std::string& lhs, const std::string& rhs, const std::string& ring, const Defs& defs, const Names& phis,
           const Names& mult) {
            Session s(ring, defs, phis, mult);
            auto r = s.ctx->prove_equal(s.ctx->parse(lhs, &s.defs), s.ctx->parse(rhs, &s.defs));
            return py::make_tuple(r.equal, r.difference.str());
        },
        py::arg("lhs"), py::arg("rhs"), py::arg("ring") = "qx", py::arg("defs") = Defs{}, py::arg("phis") = Names{},
        py::arg("mult") = Names{}, "Returns (equal, normal form of lhs - rhs).");

    m.def(
        "confluence_json",
        [](const std::string& system, bool traces) {
            return tenred::check_confluence(tenred::shipped_system(system), traces).json(traces);
        },
        py::arg("system"), py::arg("traces") = false);

    m.def("systems", &tenred::shipped_system_names);
    m.def("system_text", [](const std::string& name) { return tenred::shipped_system(name).text(); });

    m.def(
        "taylor",
        [](const std::string& f, unsigned n, const std::string& ring) {
            Session s(ring, {}, {}, {});
            auto t = taylor_parts(*s.ring, s.elem(f), n);
            return py::make_tuple(s.ring->format(t.poly), s.ring->format(t.remainder), s.ring->format(t.correction));
        },
        py::arg("f"), py::arg("n"), py::arg("ring") = "qx");

    m.def(
        "x_n",
        [](unsigned n, const std::string& ring) {
            RingPtr r = make_ring(ring);
            return r->format(x_n(*r, n));
        },
        py::arg("n"), py::arg("ring") = "qx");

    m.def(
        "ring_op",
        [](const std::string& op, const std::string& f, const std::string& ring) {
            Session s(ring, {}, {}, {});
            RingElem e = s.elem(f);
            if (op == "derive") return s.ring->format(s.ring->derive(e));
            if (op == "integrate") return s.ring->format(s.ring->integrate(e));
            if (op == "evaluate") return s.ring->format(s.ring->evaluate(e));
            throw py::value_error("op must be derive, integrate or evaluate");
        },
        py::arg("op"), py::arg("f"), py::arg("ring") = "qx");
}
