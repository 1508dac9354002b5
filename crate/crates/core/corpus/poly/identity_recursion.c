int id(int x, int c) {
    int r;
    if (c > 0) {
        r = id(x, c - 1);
    } else {
        r = x;
    }
    return r;
}

void main(int x, int c) {
    int y;
    y = id(x, c);
}
