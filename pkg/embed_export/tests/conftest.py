import os
import string

import pytest

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A small local masked-LM checkpoint usable through from_pretrained.

    No pretrained weights are downloadable here, so the fixture saves a
    randomly initialized BERT-architecture model with a WordPiece vocabulary
    covering the demo corpus. Alignment, round-trip and determinism
    properties do not depend on the weights.
    """
    import torch
    from transformers import BertConfig, BertForMaskedLM, BertTokenizerFast

    out = tmp_path_factory.mktemp("tiny-mlm")
    words = sorted(
        set(
            "what is the highest lowest total average how many when and above below "
            "player nationality points rank city country population founded team coach "
            "wins losses film director budget rating marcus camby terrence ross pau "
            "gasol luol deng manu ginobili united states canada spain britain argentina "
            "madrid toronto new york nairobi zurich kenya switzerland arsenal arteta "
            "liverpool slot ajax farioli porto conceicao boca gago solaris stalker "
            "tarkovsky ran kurosawa playtime tati brazil gilliam".split()
        )
    )
    pieces = [f"##{c}" for c in string.ascii_lowercase] + [f"##{d}" for d in string.digits]
    digits = list(string.digits) + [str(n) for n in (5, 15, 25, 100, 1000, 20, 35, 40)]
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", ";"] + words + pieces + sorted(set(digits))
    (out / "vocab.txt").write_text("\n".join(dict.fromkeys(vocab)), encoding="utf-8")
    tokenizer = BertTokenizerFast(vocab_file=str(out / "vocab.txt"), do_lower_case=True)
    config = BertConfig(
        vocab_size=tokenizer.vocab_size,
        hidden_size=16,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=128,
    )
    torch.manual_seed(1234)
    model = BertForMaskedLM(config)
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    return str(out)


@pytest.fixture(scope="session")
def demo_corpus(tmp_path_factory):
    """Line-delimited corpus files in the shared WikiSQL-style layout."""
    from sqlsketch import synth

    out = tmp_path_factory.mktemp("corpus")
    tables, train, dev = synth.write_corpus(out, n_train=100, n_dev=10, seed=13)
    return {"tables": str(tables), "train": str(train), "dev": str(dev)}
