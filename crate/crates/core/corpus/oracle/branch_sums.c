void f(int a, int b, int c) {
    if (a < b) {
        a = a + b;
        c = c + 1;
    } else {
        b = b + c;
        c = a - b;
    }
    a = a + c;
}
