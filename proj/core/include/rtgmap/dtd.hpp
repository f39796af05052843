#ifndef RTGMAP_DTD_HPP
#define RTGMAP_DTD_HPP

#include <string>

#include "rtgmap/grammar.hpp"

namespace rtgmap {

/// Imports a DTD subset: `<!ELEMENT name (model)>` declarations with `,`
/// (concatenation), `|`, postfix `*` and parentheses; `(#PCDATA)` and EMPTY
/// declare leaf elements. Undeclared child names become leaf elements too.
/// One non-terminal per element (first letter uppercased, `_k` on clashes);
/// start symbols are the declared elements used in no content model.
/// `+`, `?`, mixed content, attribute lists and entities are unsupported.
Grammar import_dtd(const std::string& text);

} // namespace rtgmap

#endif
