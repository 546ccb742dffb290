#!/usr/bin/env python3
"""Regenerates the two sample WARC files under crates/core/tests/fixtures/warc.

Pages are built from paragraphs of the bundled language seed corpora and
wrapped in HTML with a mix of license markup. The output is deterministic.
"""
import gzip
import io
import pathlib
import uuid

ROOT = pathlib.Path(__file__).resolve().parent.parent
SEEDS = ROOT / "crates/core/data/langid"
OUT = ROOT / "crates/core/tests/fixtures/warc"

LICENSES = [
    '<footer><a rel="license" href="https://creativecommons.org/licenses/by/4.0/">CC BY 4.0</a></footer>',
    '',
    '<footer><p>Some rights reserved.</p><a href="//creativecommons.org/publicdomain/zero/1.0/">CC0</a></footer>',
    '<div class="site-footer"><a href="https://creativecommons.org/licenses/by-nc/4.0/deed.nl">BY-NC</a></div>',
]
HEAD_META = '<meta name="dcterms.license" content="https://creativecommons.org/licenses/by-sa/3.0/nl/">'


def paragraphs(lang):
    return [p for p in (SEEDS / f"{lang}.txt").read_text(encoding="utf-8").splitlines() if p.strip()]


def record_id(label):
    return f"<urn:uuid:{uuid.uuid5(uuid.NAMESPACE_URL, label)}>"


def warc_record(headers, block):
    head = "WARC/1.0\r\n" + "".join(f"{k}: {v}\r\n" for k, v in headers) + f"Content-Length: {len(block)}\r\n\r\n"
    return head.encode() + block + b"\r\n\r\n"


def http_response(body, content_type="text/html; charset=utf-8", status="200 OK"):
    return f"HTTP/1.1 {status}\r\nContent-Type: {content_type}\r\nContent-Length: {len(body)}\r\n\r\n".encode() + body


def page(lang, i, text):
    lic = LICENSES[i % len(LICENSES)]
    meta = HEAD_META if i % 5 == 4 else ""
    html = (
        f'<!DOCTYPE html><html lang="{lang}"><head><meta charset="utf-8"><title>{lang} {i}</title>{meta}'
        f"<script>var x = 1;</script></head><body><nav>home</nav><main><h1>{lang} {i}</h1>"
        f"<p>{text}</p></main>{lic}</body></html>"
    )
    return html.encode("utf-8")


def build(name, crawl, langs, paragraph_slice, gzip_members, extras):
    records = []
    date = "2024-03-01T12:00:00Z"
    info = f"software: sample-generator\r\nisPartOf: {crawl}\r\n".encode()
    records.append(warc_record([("WARC-Type", "warcinfo"), ("WARC-Date", date), ("WARC-Record-ID", record_id(name + "info"))], info))
    expected = 0
    for lang in langs:
        for i, text in list(enumerate(paragraphs(lang)))[paragraph_slice]:
            url = f"https://www.{lang}-site{i % 3}.example.org/page/{i}"
            records.append(warc_record(
                [("WARC-Type", "request"), ("WARC-Date", date), ("WARC-Record-ID", record_id(url + "req")), ("WARC-Target-URI", url)],
                f"GET /page/{i} HTTP/1.1\r\nHost: example.org\r\n\r\n".encode()))
            records.append(warc_record(
                [("WARC-Type", "response"), ("WARC-Date", date), ("WARC-Record-ID", record_id(url)), ("WARC-Target-URI", url),
                 ("Content-Type", "application/http; msgtype=response")],
                http_response(page(lang, i, text))))
            expected += 1
    expected += extras(records, date)
    out = io.BytesIO()
    for r in records:
        out.write(gzip.compress(r, mtime=0) if gzip_members else r)
    (OUT / name).write_bytes(out.getvalue())
    return expected


def extras_a(records, date):
    url = "https://docs.example.org/report.pdf"
    records.append(warc_record(
        [("WARC-Type", "response"), ("WARC-Date", date), ("WARC-Record-ID", record_id(url)), ("WARC-Target-URI", url)],
        http_response(b"%PDF-1.4 binary", "application/pdf")))
    url = "https://www.nld-site0.example.org/page/0"
    records.append(warc_record(
        [("WARC-Type", "revisit"), ("WARC-Date", date), ("WARC-Record-ID", record_id(url + "rev")), ("WARC-Target-URI", url)], b""))
    return 0


def extras_b(records, date):
    url = "https://transcripts.example.org/episode-1"
    text = "Dit is een uitgeschreven aflevering van een podcast over de geschiedenis van de Friese dorpen en hun kerken.".encode()
    records.append(warc_record(
        [("WARC-Type", "conversion"), ("WARC-Date", date), ("WARC-Record-ID", record_id(url)), ("WARC-Target-URI", url),
         ("Content-Type", "text/plain")], text))
    url = "https://empty.example.org/"
    records.append(warc_record(
        [("WARC-Type", "response"), ("WARC-Date", date), ("WARC-Record-ID", record_id(url)), ("WARC-Target-URI", url)],
        http_response(b"", status="404 Not Found")))
    # header corrupted by flipping ':' (0x3a) to 0x3b, so the line has no separator
    url = "https://corrupt.example.org/"
    bad = warc_record(
        [("WARC-Type", "response"), ("WARC-Date", date), ("WARC-Record-ID", record_id(url)), ("WARC-Target-URI", url)],
        http_response(b"<p>never seen</p>"))
    bad = bad.replace(b"WARC-Type:", b"WARC-Type;", 1)
    records.append(bad)
    return 1


if __name__ == "__main__":
    a = build("sample-a.warc.gz", "CC-MAIN-2024-10", ["nld", "eng", "deu", "fry", "afr", "dan"], slice(0, 6), True, extras_a)
    b = build("sample-b.warc", "CC-MAIN-2024-18", ["fra", "ita", "spa", "nld", "eng"], slice(6, 12), False, extras_b)
    print(f"sample-a: {a} records expected, sample-b: {b} records expected")
